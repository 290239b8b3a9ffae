//! Exact Walsh spectra and their plain and twisted moments.
//!
//! W_F(a,b) = sum over x of (-1)^(Tr(b F(x)) + Tr(a x)). Each component
//! (fixed b) is computed by the self-inverse +-1 butterfly transform in
//! O(n 2^n); the butterfly works against the dot-product pairing, so a
//! per-field index remap converts dot-product rows into trace-pairing rows.
//! Everything is exact integer arithmetic.

use crate::gf2n::{Field, FieldElement};
use crate::vbf::Vbf;
use crate::{Error, Result};
use rayon::prelude::*;
use std::io::Write;
use std::sync::Arc;

/// Largest degree for which a full 2^n x 2^n Walsh table is materialized.
/// Above this the moment routines stream per-component rows instead.
pub const MAX_TABLE_DEGREE: u32 = 12;

/// In-place fast Walsh-Hadamard butterfly (unnormalized, self-inverse up to
/// the factor 2^n). Length must be a power of two.
pub fn fwht(data: &mut [i32]) {
    let mut half = 1;
    while half < data.len() {
        for chunk in data.chunks_mut(2 * half) {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        half <<= 1;
    }
}

/// Index map turning dot-product butterfly output into trace-pairing rows:
/// Tr(a x) = <map[a], x> where <,> is the bitwise dot product.
fn trace_index_map(field: &Field) -> Vec<u32> {
    let n = field.n();
    (0..field.size() as u32)
        .map(|a| {
            let a = FieldElement(a as u16);
            let mut m = 0u32;
            for j in 0..n {
                let basis = FieldElement(1 << j);
                m |= (field.trace(field.mul(a, basis)) as u32) << j;
            }
            m
        })
        .collect()
}

/// One Walsh component: out[a] = W_F(a, b), for all a.
fn component_into(f: &Vbf, b: FieldElement, imap: &[u32], scratch: &mut [i32], out: &mut [i32]) {
    let field = f.field();
    for (x, s) in scratch.iter_mut().enumerate() {
        let bit = field.trace(field.mul(b, FieldElement(f.table()[x])));
        *s = 1 - 2 * bit as i32;
    }
    fwht(scratch);
    for (a, o) in out.iter_mut().enumerate() {
        *o = scratch[imap[a] as usize];
    }
}

/// One Walsh component as an owned row.
pub fn walsh_component(f: &Vbf, b: FieldElement) -> Vec<i32> {
    let imap = trace_index_map(f.field());
    let mut scratch = vec![0i32; f.size()];
    let mut out = vec![0i32; f.size()];
    component_into(f, b, &imap, &mut scratch, &mut out);
    out
}

/// The full table of exact Walsh coefficients.
#[derive(Debug, Clone)]
pub struct WalshTable {
    field: Arc<Field>,
    /// rows[b << n | a] = W_F(a, b).
    rows: Vec<i32>,
}

/// Computes the complete Walsh table of `f`. Components are independent and
/// run in parallel; rows land at fixed offsets, so the result does not
/// depend on the worker count. Requires n <= 12 (64 MiB of i32 at the cap);
/// use the `*_of` moment functions for larger fields.
pub fn walsh_full(f: &Vbf) -> Result<WalshTable> {
    let n = f.n();
    if n > MAX_TABLE_DEGREE {
        return Err(Error::Infeasible(format!(
            "full Walsh table at n={n} needs {} entries; stream components instead",
            (1u64 << n) * (1u64 << n)
        )));
    }
    let size = f.size();
    let imap = trace_index_map(f.field());
    let mut rows = vec![0i32; size * size];
    rows.par_chunks_mut(size).enumerate().for_each(|(b, out)| {
        let mut scratch = vec![0i32; size];
        component_into(f, FieldElement(b as u16), &imap, &mut scratch, out);
    });
    Ok(WalshTable {
        field: Arc::clone(f.field_arc()),
        rows,
    })
}

impl WalshTable {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    #[inline]
    pub fn get(&self, a: FieldElement, b: FieldElement) -> i64 {
        self.rows[(b.index() << self.field.n()) | a.index()] as i64
    }

    /// The component row for a fixed b, indexed by a.
    pub fn row(&self, b: FieldElement) -> &[i32] {
        let size = self.field.size();
        &self.rows[b.index() * size..(b.index() + 1) * size]
    }

    /// Exact moment sum over all (a, b), including b = 0.
    pub fn moment(&self, k: u32) -> Result<MomentReport> {
        check_moment_order(k, 4)?;
        let mut value: i128 = 0;
        for b in self.field.elements() {
            value += row_moment(self.row(b), k, None);
        }
        Ok(MomentReport {
            k,
            twist: None,
            value,
        })
    }

    /// Moment sum twisted by (-1)^(Tr(a x0 + b y0)).
    pub fn twisted_moment(
        &self,
        k: u32,
        x0: FieldElement,
        y0: FieldElement,
    ) -> Result<MomentReport> {
        check_moment_order(k, 3)?;
        let a_signs = twist_signs(&self.field, x0);
        let mut value: i128 = 0;
        for b in self.field.elements() {
            let b_sign = 1 - 2 * self.field.trace(self.field.mul(b, y0)) as i128;
            value += b_sign * row_moment(self.row(b), k, Some(&a_signs));
        }
        Ok(MomentReport {
            k,
            twist: Some((x0, y0)),
            value,
        })
    }

    /// CSV export: one `a,b,w` row per table entry, a-major.
    pub fn to_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "a,b,w")?;
        for a in self.field.elements() {
            for b in self.field.elements() {
                writeln!(out, "0x{:x},0x{:x},{}", a.0, b.0, self.get(a, b))?;
            }
        }
        Ok(())
    }
}

fn check_moment_order(k: u32, max: u32) -> Result<()> {
    if (2..=max).contains(&k) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "moment order {k} unsupported (expected 2..={max})"
        )))
    }
}

fn twist_signs(field: &Field, x0: FieldElement) -> Vec<i8> {
    field
        .elements()
        .map(|a| 1 - 2 * field.trace(field.mul(a, x0)) as i8)
        .collect()
}

fn row_moment(row: &[i32], k: u32, a_signs: Option<&[i8]>) -> i128 {
    let mut acc: i128 = 0;
    match a_signs {
        None => {
            for &w in row {
                acc += (w as i128).pow(k);
            }
        }
        Some(signs) => {
            for (&w, &s) in row.iter().zip(signs) {
                acc += s as i128 * (w as i128).pow(k);
            }
        }
    }
    acc
}

/// An exact moment value. `twist` records the (x0, y0) weight when present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentReport {
    pub k: u32,
    pub twist: Option<(FieldElement, FieldElement)>,
    pub value: i128,
}

impl MomentReport {
    /// JSON form; the value is a decimal string, never a float.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "twist": self.twist.map(|(x0, y0)| serde_json::json!({
                "x0": x0.to_string(),
                "y0": y0.to_string(),
            })),
            "value": self.value.to_string(),
        })
    }
}

/// Moment of `f` without materializing the full table: components are
/// computed on the fly and reduced in a fixed order, so the value is
/// bit-identical to the table-backed path and independent of parallelism.
pub fn moment_of(f: &Vbf, k: u32) -> Result<MomentReport> {
    check_moment_order(k, 4)?;
    Ok(MomentReport {
        k,
        twist: None,
        value: streamed_sum(f, k, None),
    })
}

/// Twisted moment of `f`, streaming per-component rows.
pub fn twisted_moment_of(
    f: &Vbf,
    k: u32,
    x0: FieldElement,
    y0: FieldElement,
) -> Result<MomentReport> {
    check_moment_order(k, 3)?;
    Ok(MomentReport {
        k,
        twist: Some((x0, y0)),
        value: streamed_sum(f, k, Some((x0, y0))),
    })
}

fn streamed_sum(f: &Vbf, k: u32, twist: Option<(FieldElement, FieldElement)>) -> i128 {
    let field = f.field();
    let imap = trace_index_map(field);
    let a_signs = twist.map(|(x0, _)| twist_signs(field, x0));
    let partials: Vec<i128> = (0..f.size() as u32)
        .into_par_iter()
        .map(|b| {
            let b = FieldElement(b as u16);
            let mut scratch = vec![0i32; f.size()];
            let mut row = vec![0i32; f.size()];
            component_into(f, b, &imap, &mut scratch, &mut row);
            let inner = row_moment(&row, k, a_signs.as_deref());
            match twist {
                None => inner,
                Some((_, y0)) => {
                    (1 - 2 * field.trace(field.mul(b, y0)) as i128) * inner
                }
            }
        })
        .collect();
    partials.iter().sum()
}

/// D_F(b) = 1 - (-1)^(Tr(b eps)); takes values 0 and 2.
pub fn d_factor(field: &Field, b: FieldElement, eps: FieldElement) -> i64 {
    2 * field.trace(field.mul(b, eps)) as i64
}

/// E_F(a,b) = (-1)^(Tr(a x0 + b y0)) D_F(b); takes values -2, 0, 2.
pub fn e_factor(
    field: &Field,
    a: FieldElement,
    b: FieldElement,
    x0: FieldElement,
    y0: FieldElement,
    eps: FieldElement,
) -> i64 {
    let bit = field.trace(field.mul(a, x0)) ^ field.trace(field.mul(b, y0));
    (1 - 2 * bit as i64) * d_factor(field, b, eps)
}

/// Checks, entry by entry, that the Walsh table of the (x0, eps)-modification
/// satisfies W_F'(a,b) = W_F(a,b) - E_F(a,b), with both tables computed
/// independently.
pub fn verify_walsh_diff(f: &Vbf, x0: FieldElement, eps: FieldElement) -> Result<bool> {
    if eps.is_zero() {
        return Err(Error::ZeroModification);
    }
    let field = f.field();
    let y0 = f.eval(x0);
    let w = walsh_full(f)?;
    let w_mod = walsh_full(&f.modify_at(x0, eps)?)?;
    for a in field.elements() {
        for b in field.elements() {
            let expected = w.get(a, b) - e_factor(field, a, b, x0, y0, eps);
            if w_mod.get(a, b) != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
