//! Arithmetic in GF(2^n) for 1 <= n <= 16.
//!
//! Elements are stored in the polynomial basis: bit i of the mask is the
//! coefficient of g^i, where g is the class of x modulo the field polynomial.
//! Every field uses a fixed primitive modulus, so g generates the
//! multiplicative group and multiplication runs through log/antilog tables.

mod poly;

pub use poly::{
    binom_mod2, cyclotomic_cosets, gcd, minimal_polynomial, poly_divides, BinaryPolynomial,
    CyclotomicCoset,
};

use crate::{Error, Result};

/// Largest supported extension degree. Value tables are 2^n entries and
/// difference tables 2^(2n); 16 keeps both within desk memory.
pub const MAX_DEGREE: u32 = 16;

/// Lexicographically smallest primitive polynomial of each degree 1..=16,
/// encoded with bit i = coefficient of x^i. Entry k is degree k+1.
/// Verified by the brute-force order check in the tests below.
const PRIMITIVE_POLYS: [u32; MAX_DEGREE as usize] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x402b,
    0x8003, 0x1002d,
];

/// An element of GF(2^n): an n-bit mask in the polynomial basis.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

/// The ambient field: extension degree and modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    n: u32,
    modulus: u32,
}

impl FieldSpec {
    /// Field of degree `n` with the built-in (smallest primitive) modulus.
    pub fn new(n: u32) -> Result<FieldSpec> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        Ok(FieldSpec {
            n,
            modulus: PRIMITIVE_POLYS[(n - 1) as usize],
        })
    }

    /// Field of degree `n` with an explicit modulus, which must be primitive.
    pub fn with_modulus(n: u32, modulus: u32) -> Result<FieldSpec> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        let spec = FieldSpec { n, modulus };
        if modulus >> n != 1 || modulus & 1 == 0 || !spec.x_has_full_order() {
            return Err(Error::NotPrimitive { n, modulus });
        }
        Ok(spec)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, 2^n.
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// Order of the multiplicative group, 2^n - 1.
    pub fn order(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    /// True iff the class of x generates all 2^n - 1 nonzero residues.
    fn x_has_full_order(&self) -> bool {
        let order = self.order();
        let mut v: u32 = 1;
        for step in 1..=order {
            v <<= 1;
            if v >> self.n & 1 == 1 {
                v ^= self.modulus;
            }
            if v == 1 {
                return step == order;
            }
            if v == 0 {
                return false;
            }
        }
        false
    }
}

/// Discrete-log acceleration tables for a primitive modulus.
///
/// `antilog[k] = g^k` for 0 <= k < 2^n - 1 and `log[antilog[k]] = k`.
#[derive(Debug, Clone)]
pub struct DLogTables {
    log: Vec<u16>,
    antilog: Vec<u16>,
}

impl DLogTables {
    fn build(spec: &FieldSpec) -> DLogTables {
        let order = spec.order() as usize;
        let mut antilog = vec![0u16; order];
        let mut log = vec![0u16; spec.size()];
        let mut v: u32 = 1;
        for (k, slot) in antilog.iter_mut().enumerate() {
            *slot = v as u16;
            log[v as usize] = k as u16;
            v <<= 1;
            if v >> spec.n & 1 == 1 {
                v ^= spec.modulus;
            }
        }
        DLogTables { log, antilog }
    }

    pub fn log(&self) -> &[u16] {
        &self.log
    }

    pub fn antilog(&self) -> &[u16] {
        &self.antilog
    }
}

/// A fully constructed field: spec, dlog tables and the precomputed trace
/// table. Immutable after construction and freely shareable across workers.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    tables: DLogTables,
    trace: Vec<u8>,
}

impl Field {
    pub fn new(n: u32) -> Result<Field> {
        Ok(Field::build(FieldSpec::new(n)?))
    }

    pub fn with_modulus(n: u32, modulus: u32) -> Result<Field> {
        Ok(Field::build(FieldSpec::with_modulus(n, modulus)?))
    }

    fn build(spec: FieldSpec) -> Field {
        let tables = DLogTables::build(&spec);
        let mut field = Field {
            spec,
            tables,
            trace: Vec::new(),
        };
        let mut trace = vec![0u8; spec.size()];
        for (x, t) in trace.iter_mut().enumerate() {
            *t = field.trace_by_squaring(FieldElement(x as u16));
        }
        field.trace = trace;
        field
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn tables(&self) -> &DLogTables {
        &self.tables
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn size(&self) -> usize {
        self.spec.size()
    }

    pub fn order(&self) -> u32 {
        self.spec.order()
    }

    pub fn modulus(&self) -> u32 {
        self.spec.modulus
    }

    /// The primitive element g (class of x; for n = 1 that class is 1).
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.tables.antilog[if self.n() == 1 { 0 } else { 1 }])
    }

    /// Validates that `value` is an n-bit mask.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if (value as usize) < self.size() {
            Ok(FieldElement(value as u16))
        } else {
            Err(Error::ElementOutOfRange { n: self.n(), value })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size() as u32).map(|v| FieldElement(v as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let order = self.order() as u32;
        let mut k = self.tables.log[a.index()] as u32 + self.tables.log[b.index()] as u32;
        if k >= order {
            k -= order;
        }
        FieldElement(self.tables.antilog[k as usize])
    }

    #[inline]
    pub fn sq(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::InverseOfZero);
        }
        let order = self.order() as usize;
        let k = self.tables.log[a.index()] as usize;
        Ok(FieldElement(self.tables.antilog[(order - k) % order]))
    }

    /// g^k with k reduced modulo 2^n - 1.
    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement(self.tables.antilog[(k % self.order() as u64) as usize])
    }

    /// Discrete log of a nonzero element.
    pub fn dlog(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.tables.log[a.index()] as u32)
        }
    }

    /// a^e for a nonnegative exponent; 0^0 = 1 and 0^e = 0 for e > 0.
    #[inline]
    pub fn pow_u(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.is_zero() {
            return if e == 0 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
        }
        let order = self.order() as u64;
        let k = (self.tables.log[a.index()] as u64 * (e % order)) % order;
        FieldElement(self.tables.antilog[k as usize])
    }

    /// a^e for any integer exponent. Negative exponents are reduced modulo
    /// 2^n - 1 for nonzero a; 0 raised to a negative power is an error.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            return Ok(self.pow_u(a, e as u64));
        }
        if a.is_zero() {
            return Err(Error::NegativePowerOfZero);
        }
        let order = self.order() as i64;
        let r = e.rem_euclid(order) as u64;
        Ok(self.pow_u(a, r))
    }

    /// Absolute trace Tr(x) = sum of x^(2^i), returned as a bit.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> u8 {
        self.trace[a.index()]
    }

    /// Trace computed from the definition, without table lookups.
    fn trace_by_squaring(&self, a: FieldElement) -> u8 {
        let mut acc = a;
        let mut t = a;
        for _ in 1..self.n() {
            t = self.mul(t, t);
            acc += t;
        }
        debug_assert!(acc.0 <= 1, "trace must land in GF(2)");
        acc.0 as u8
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF(2^{}) mod 0x{:x}", self.n, self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_moduli_match_known_small_cases() {
        assert_eq!(FieldSpec::new(1).unwrap().modulus(), 0b11);
        assert_eq!(FieldSpec::new(3).unwrap().modulus(), 0b1011);
    }

    #[test]
    fn builtin_moduli_are_smallest_primitive() {
        // Brute force: no smaller monic degree-n polynomial passes the
        // x-has-full-order test.
        for n in 1..=MAX_DEGREE {
            let expected = FieldSpec::new(n).unwrap().modulus();
            let mut smallest = None;
            for mask in (1u32 << n) + 1..1u32 << (n + 1) {
                if FieldSpec::with_modulus(n, mask).is_ok() {
                    smallest = Some(mask);
                    break;
                }
            }
            assert_eq!(smallest, Some(expected), "degree {n}");
        }
    }

    #[test]
    fn degree_bounds_rejected() {
        assert!(matches!(FieldSpec::new(0), Err(Error::DegreeOutOfRange(0))));
        assert!(matches!(
            FieldSpec::new(17),
            Err(Error::DegreeOutOfRange(17))
        ));
    }

    #[test]
    fn non_primitive_modulus_rejected() {
        // x^8 + x^4 + x^3 + x + 1 (0x11b) is irreducible but not primitive.
        assert!(Field::with_modulus(8, 0x11b).is_err());
        // Reducible: x^4 + 1 = (x+1)^4.
        assert!(Field::with_modulus(4, 0x11).is_err());
        // Degree mismatch.
        assert!(Field::with_modulus(4, 0b1011).is_err());
    }

    #[test]
    fn antilog_enumerates_all_nonzero_elements() {
        for n in 1..=10 {
            let f = Field::new(n).unwrap();
            let mut seen = vec![false; f.size()];
            for &v in f.tables().antilog() {
                assert!(!seen[v as usize], "repeat in antilog at n={n}");
                seen[v as usize] = true;
            }
            assert!(!seen[0]);
            assert!(seen[1..].iter().all(|&s| s));
            assert_eq!(f.tables().antilog()[0], 1);
        }
    }

    #[test]
    fn mul_axioms_exhaustive_small() {
        for n in 1..=6 {
            let f = Field::new(n).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
            // Associativity and distributivity on sampled triples.
            let step = if n <= 4 { 1 } else { 3 };
            for a in f.elements().step_by(step) {
                for b in f.elements().step_by(step) {
                    for c in f.elements().step_by(step) {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_and_fermat() {
        for n in [1, 3, 5, 8] {
            let f = Field::new(n).unwrap();
            assert!(matches!(f.inv(FieldElement::ZERO), Err(Error::InverseOfZero)));
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
            for a in f.elements() {
                assert_eq!(f.pow_u(a, 1u64 << n), a, "x^(2^n) = x at n={n}");
            }
        }
    }

    #[test]
    fn pow_signed_semantics() {
        let f = Field::new(4).unwrap();
        let g = f.generator();
        assert_eq!(f.pow(g, -1).unwrap(), f.inv(g).unwrap());
        assert_eq!(f.pow(g, -(f.order() as i64)).unwrap(), FieldElement::ONE);
        assert_eq!(f.pow(FieldElement::ZERO, 0).unwrap(), FieldElement::ONE);
        assert_eq!(f.pow(FieldElement::ZERO, 5).unwrap(), FieldElement::ZERO);
        assert!(matches!(
            f.pow(FieldElement::ZERO, -2),
            Err(Error::NegativePowerOfZero)
        ));
    }

    #[test]
    fn trace_is_linear_and_balanced() {
        for n in 1..=8 {
            let f = Field::new(n).unwrap();
            let mut zeros = 0;
            for x in f.elements() {
                assert!(f.trace(x) <= 1);
                if f.trace(x) == 0 {
                    zeros += 1;
                }
                for y in f.elements() {
                    assert_eq!(f.trace(x + y), f.trace(x) ^ f.trace(y));
                }
            }
            assert_eq!(zeros, f.size() / 2, "trace balanced at n={n}");
        }
    }

    #[test]
    fn trace_zero_iff_artin_schreier_image() {
        // Tr(u) = 0 iff u = b^2 + b for some b; exhaustive for n <= 8.
        for n in 1..=8 {
            let f = Field::new(n).unwrap();
            let mut image = vec![false; f.size()];
            for b in f.elements() {
                image[(f.sq(b) + b).index()] = true;
            }
            for u in f.elements() {
                assert_eq!(f.trace(u) == 0, image[u.index()], "n={n} u={u}");
            }
        }
    }

    #[test]
    fn gcd_of_mersennes() {
        for a in 1u64..=16 {
            for b in 1u64..=16 {
                assert_eq!(
                    gcd((1 << a) - 1, (1 << b) - 1),
                    (1u64 << gcd(a, b)) - 1,
                    "a={a} b={b}"
                );
            }
        }
    }
}
