//! Vectorial Boolean functions F: GF(2^n) -> GF(2^n) as exhaustive value
//! tables, plus the constructions used throughout: power maps, parsed
//! univariate/trace/linearized expressions, and single-point modifications.

mod expr;

pub use expr::{FuncExpr, Monomial, Term};

use crate::gf2n::{Field, FieldElement};
use crate::{Error, Result};
use std::sync::Arc;

/// An (n,n)-function, stored as its full value table: `table[x] = F(x)`.
#[derive(Debug, Clone)]
pub struct Vbf {
    field: Arc<Field>,
    table: Vec<u16>,
}

impl Vbf {
    /// Wraps a value table, validating that every entry is an n-bit mask.
    pub fn from_table(field: &Arc<Field>, table: Vec<u16>) -> Result<Vbf> {
        if table.len() != field.size() {
            return Err(Error::Malformed(format!(
                "value table has {} entries, expected {}",
                table.len(),
                field.size()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= field.size()) {
            return Err(Error::ElementOutOfRange {
                n: field.n(),
                value: bad as u32,
            });
        }
        Ok(Vbf {
            field: Arc::clone(field),
            table,
        })
    }

    /// Builds the table by evaluating `f` at every point.
    pub fn from_fn(field: &Arc<Field>, mut f: impl FnMut(FieldElement) -> FieldElement) -> Vbf {
        let table = (0..field.size() as u32)
            .map(|x| f(FieldElement(x as u16)).0)
            .collect();
        Vbf {
            field: Arc::clone(field),
            table,
        }
    }

    /// The power map x -> x^m. The exponent must lie in [0, 2^n - 1].
    pub fn from_power(field: &Arc<Field>, m: u64) -> Result<Vbf> {
        let max = field.order() as u64;
        if m > max {
            return Err(Error::ExponentOutOfRange { exponent: m, max });
        }
        Ok(Vbf::from_fn(field, |x| field.pow_u(x, m)))
    }

    /// Parses `src` against the expression grammar and evaluates it
    /// pointwise. See [`FuncExpr`] for the grammar.
    pub fn from_expression(field: &Arc<Field>, src: &str) -> Result<Vbf> {
        let expr = FuncExpr::parse(field, src)?;
        Ok(expr.to_vbf(field))
    }

    /// A uniformly random value table.
    pub fn random<R: rand::Rng + ?Sized>(field: &Arc<Field>, rng: &mut R) -> Vbf {
        let mask = (field.size() - 1) as u16;
        let table = (0..field.size()).map(|_| rng.gen::<u16>() & mask).collect();
        Vbf {
            field: Arc::clone(field),
            table,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.table[x.index()])
    }

    /// The (x0, eps)-modification: equal to F everywhere except at x0, where
    /// the value becomes F(x0) + eps. The step eps must be nonzero.
    pub fn modify_at(&self, x0: FieldElement, eps: FieldElement) -> Result<Vbf> {
        if eps.is_zero() {
            return Err(Error::ZeroModification);
        }
        let mut table = self.table.clone();
        table[x0.index()] ^= eps.0;
        Ok(Vbf {
            field: Arc::clone(&self.field),
            table,
        })
    }

    /// True iff every second derivative D_a D_b F is constant, checked
    /// exhaustively over distinct nonzero directions. Affine functions count
    /// as (degenerate) quadratics.
    pub fn is_quadratic(&self) -> bool {
        let size = self.size();
        let t = &self.table;
        for a in 1..size {
            for b in a + 1..size {
                let c = t[0] ^ t[a] ^ t[b] ^ t[a ^ b];
                for x in 1..size {
                    if t[x] ^ t[x ^ a] ^ t[x ^ b] ^ t[x ^ a ^ b] != c {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Serializes as JSON `{n, modulus, table}` with hex-string entries.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n(),
            "modulus": format!("0x{:x}", self.field.modulus()),
            "table": self.table.iter().map(|v| format!("0x{v:x}")).collect::<Vec<_>>(),
        })
    }

    /// Reads back the [`Vbf::to_json`] format.
    pub fn from_json(value: &serde_json::Value) -> Result<Vbf> {
        let n = value
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Malformed("missing field \"n\"".into()))? as u32;
        let modulus = value
            .get("modulus")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Malformed("missing field \"modulus\"".into()))?;
        let modulus = parse_hex(modulus)?;
        let field = Arc::new(Field::with_modulus(n, modulus)?);
        let table = value
            .get("table")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Malformed("missing field \"table\"".into()))?
            .iter()
            .map(|e| {
                e.as_str()
                    .ok_or_else(|| Error::Malformed("table entry is not a string".into()))
                    .and_then(parse_hex)
                    .map(|v| v as u16)
            })
            .collect::<Result<Vec<u16>>>()?;
        Vbf::from_table(&field, table)
    }

    /// Raw binary serialization: little-endian 2-byte entries, 2^n of them.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.table.iter().flat_map(|v| v.to_le_bytes()).collect()
    }

    /// Reads back the [`Vbf::to_bytes`] format for the given field.
    pub fn from_bytes(field: &Arc<Field>, bytes: &[u8]) -> Result<Vbf> {
        if bytes.len() != field.size() * 2 {
            return Err(Error::Malformed(format!(
                "expected {} bytes, got {}",
                field.size() * 2,
                bytes.len()
            )));
        }
        let table = bytes
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]))
            .collect();
        Vbf::from_table(field, table)
    }
}

fn parse_hex(s: &str) -> Result<u32> {
    let digits = s
        .strip_prefix("0x")
        .ok_or_else(|| Error::Malformed(format!("expected 0x-prefixed hex, got {s:?}")))?;
    u32::from_str_radix(digits, 16)
        .map_err(|_| Error::Malformed(format!("bad hex constant {s:?}")))
}

/// A linearized polynomial L(x) = sum c_i x^(2^i) with exactly n
/// coefficients; a GF(2)-linear map on GF(2^n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedPoly {
    coeffs: Vec<FieldElement>,
}

impl LinearizedPoly {
    /// Builds from up to n coefficients, zero-padding short lists.
    pub fn new(n: u32, coeffs: &[FieldElement]) -> Result<LinearizedPoly> {
        if coeffs.len() > n as usize {
            return Err(Error::Malformed(format!(
                "linearized polynomial has {} coefficients, field degree is {n}",
                coeffs.len()
            )));
        }
        let mut c = coeffs.to_vec();
        c.resize(n as usize, FieldElement::ZERO);
        Ok(LinearizedPoly { coeffs: c })
    }

    /// L(x) = x.
    pub fn identity(n: u32) -> LinearizedPoly {
        let mut coeffs = vec![FieldElement::ZERO; n as usize];
        coeffs[0] = FieldElement::ONE;
        LinearizedPoly { coeffs }
    }

    /// L(x) = Tr(x), embedded as the field constants 0/1.
    pub fn trace(n: u32) -> LinearizedPoly {
        LinearizedPoly {
            coeffs: vec![FieldElement::ONE; n as usize],
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn eval(&self, field: &Field, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut t = x;
        for &c in &self.coeffs {
            acc += field.mul(c, t);
            t = field.sq(t);
        }
        acc
    }
}
