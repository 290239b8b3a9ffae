//! Difference distribution tables and the APN / partial-APN verdicts built
//! on them.
//!
//! Two independent partial-APN algorithms are provided: one counting
//! derivative-equation solutions, one scanning for off-curve quadruples.
//! They implement the same notion and are cross-checked against each other
//! throughout the test suite.

use crate::gf2n::{Field, FieldElement};
use crate::vbf::Vbf;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

/// Largest degree for which the full 2^n x 2^n DDT is materialized.
pub const MAX_TABLE_DEGREE: u32 = 12;

/// The difference distribution table: counts[a][b] = number of x with
/// F(x + a) + F(x) = b.
#[derive(Debug, Clone)]
pub struct DdTable {
    field: Arc<Field>,
    counts: Vec<u32>,
}

/// Fills `out[b]` with the DDT row for direction `a`.
pub fn ddt_row(f: &Vbf, a: FieldElement, out: &mut [u32]) {
    out.fill(0);
    let t = f.table();
    let a = a.index();
    for x in 0..t.len() {
        out[(t[x ^ a] ^ t[x]) as usize] += 1;
    }
}

/// Computes the full DDT. Requires n <= 12; use [`ddt_row`] or the verdict
/// functions (which stream rows) for larger fields.
pub fn ddt(f: &Vbf) -> Result<DdTable> {
    if f.n() > MAX_TABLE_DEGREE {
        return Err(Error::Infeasible(format!(
            "full DDT at n={} needs {} entries; stream rows instead",
            f.n(),
            (1u64 << f.n()) * (1u64 << f.n())
        )));
    }
    let size = f.size();
    let mut counts = vec![0u32; size * size];
    for a in 0..size {
        ddt_row(
            f,
            FieldElement(a as u16),
            &mut counts[a * size..(a + 1) * size],
        );
    }
    Ok(DdTable {
        field: Arc::clone(f.field_arc()),
        counts,
    })
}

impl DdTable {
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn get(&self, a: FieldElement, b: FieldElement) -> u32 {
        self.counts[(a.index() << self.field.n()) | b.index()]
    }

    pub fn row(&self, a: FieldElement) -> &[u32] {
        let size = self.field.size();
        &self.counts[a.index() * size..(a.index() + 1) * size]
    }

    /// CSV export: one `a,b,count` row per entry.
    pub fn to_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "a,b,count")?;
        for a in self.field.elements() {
            for b in self.field.elements() {
                writeln!(out, "0x{:x},0x{:x},{}", a.0, b.0, self.get(a, b))?;
            }
        }
        Ok(())
    }
}

/// Differential uniformity: the largest DDT entry over a != 0.
pub fn differential_uniformity(f: &Vbf) -> u32 {
    let mut row = vec![0u32; f.size()];
    let mut best = 0;
    for a in 1..f.size() {
        ddt_row(f, FieldElement(a as u16), &mut row);
        best = best.max(*row.iter().max().unwrap());
    }
    best
}

/// The multiset of DDT values over all rows with a != 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DifferentialSpectrum {
    counts: BTreeMap<u32, u64>,
}

impl DifferentialSpectrum {
    pub fn from_pairs(pairs: &[(u32, u64)]) -> DifferentialSpectrum {
        DifferentialSpectrum {
            counts: pairs.iter().copied().collect(),
        }
    }

    /// multiplicity of a DDT value.
    pub fn multiplicity(&self, value: u32) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&v, &m)| (v, m))
    }

    pub fn max_value(&self) -> u32 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// JSON object mapping value to multiplicity.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.counts
                .iter()
                .map(|(v, m)| (v.to_string(), serde_json::json!(m)))
                .collect(),
        )
    }
}

impl std::fmt::Display for DifferentialSpectrum {
    /// Rendered like {0^31, 2^22, 4^3}.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (v, m)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}^{m}")?;
        }
        write!(f, "}}")
    }
}

/// Differential spectrum of `f`.
pub fn spectrum(f: &Vbf) -> DifferentialSpectrum {
    let mut row = vec![0u32; f.size()];
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for a in 1..f.size() {
        ddt_row(f, FieldElement(a as u16), &mut row);
        for &v in row.iter() {
            *counts.entry(v).or_insert(0) += 1;
        }
    }
    DifferentialSpectrum { counts }
}

/// APN: differential uniformity exactly 2. On GF(2) every function is
/// trivially APN (there are no off-curve triples to violate it).
pub fn is_apn(f: &Vbf) -> bool {
    let mut row = vec![0u32; f.size()];
    for a in 1..f.size() {
        ddt_row(f, FieldElement(a as u16), &mut row);
        if row.iter().any(|&v| v > 2) {
            return false;
        }
    }
    true
}

/// Partial-APN test via derivatives: F is x0-APN iff for every a != 0 the
/// equation D_a F(x) = D_a F(x0) has only the two forced solutions x0 and
/// x0 + a. On failure returns the first witness (a, x) in lexicographic
/// order with x a third solution.
pub fn is_x0_apn_derivative(
    f: &Vbf,
    x0: FieldElement,
) -> (bool, Option<(FieldElement, FieldElement)>) {
    let t = f.table();
    let size = t.len();
    let x0i = x0.index();
    for a in 1..size {
        let target = t[x0i ^ a] ^ t[x0i];
        for x in 0..size {
            if x == x0i || x == x0i ^ a {
                continue;
            }
            if t[x ^ a] ^ t[x] == target {
                return (false, Some((FieldElement(a as u16), FieldElement(x as u16))));
            }
        }
    }
    (true, None)
}

/// Partial-APN test via the quadruple condition: F is x0-APN iff no pair
/// (u, v) off the curve (x0+u)(x0+v)(u+v) = 0 satisfies
/// F(x0) + F(u) + F(v) + F(x0+u+v) = 0. On failure returns the first
/// violating pair with u < v.
pub fn is_x0_apn_rodier(
    f: &Vbf,
    x0: FieldElement,
) -> (bool, Option<(FieldElement, FieldElement)>) {
    let t = f.table();
    let size = t.len();
    let x0i = x0.index();
    let y0 = t[x0i];
    for u in 0..size {
        if u == x0i {
            continue;
        }
        for v in u + 1..size {
            if v == x0i {
                continue;
            }
            if y0 ^ t[u] ^ t[v] ^ t[x0i ^ u ^ v] == 0 {
                return (false, Some((FieldElement(u as u16), FieldElement(v as u16))));
            }
        }
    }
    (true, None)
}

/// A failing point with witnesses from both partial-APN algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PapnFailure {
    pub x0: FieldElement,
    /// (a, x): a third solution x of D_a F(x) = D_a F(x0).
    pub derivative_witness: (FieldElement, FieldElement),
    /// (u, v): an off-curve quadruple through x0.
    pub rodier_witness: (FieldElement, FieldElement),
}

/// Per-point partial-APN verdicts over the whole field.
#[derive(Debug, Clone)]
pub struct PapnReport {
    verdicts: Vec<bool>,
    failures: Vec<PapnFailure>,
}

impl PapnReport {
    pub fn verdict(&self, x0: FieldElement) -> bool {
        self.verdicts[x0.index()]
    }

    pub fn verdicts(&self) -> &[bool] {
        &self.verdicts
    }

    pub fn failures(&self) -> &[PapnFailure] {
        &self.failures
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|&v| v)
    }

    pub fn passing_points(&self) -> Vec<FieldElement> {
        self.verdicts
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(i, _)| FieldElement(i as u16))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdicts": self
                .verdicts
                .iter()
                .enumerate()
                .map(|(x0, &ok)| serde_json::json!({
                    "x0": format!("0x{x0:x}"),
                    "papn": ok,
                }))
                .collect::<Vec<_>>(),
            "failures": self
                .failures
                .iter()
                .map(|fl| serde_json::json!({
                    "x0": fl.x0.to_string(),
                    "derivative_witness": {
                        "a": fl.derivative_witness.0.to_string(),
                        "x": fl.derivative_witness.1.to_string(),
                    },
                    "rodier_witness": {
                        "u": fl.rodier_witness.0.to_string(),
                        "v": fl.rodier_witness.1.to_string(),
                    },
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Runs both partial-APN algorithms at every point. The two algorithms must
/// agree everywhere; a disagreement is an internal error. Witnesses are
/// re-verified against F by direct evaluation.
pub fn papn_set(f: &Vbf) -> Result<PapnReport> {
    let mut verdicts = Vec::with_capacity(f.size());
    let mut failures = Vec::new();
    for x0 in f.field().elements() {
        let (ok_d, wit_d) = is_x0_apn_derivative(f, x0);
        let (ok_r, wit_r) = is_x0_apn_rodier(f, x0);
        if ok_d != ok_r {
            return Err(Error::Internal(format!(
                "partial-APN algorithms disagree at x0={x0}: derivative={ok_d} rodier={ok_r}"
            )));
        }
        verdicts.push(ok_d);
        if !ok_d {
            let (a, x) = wit_d.unwrap();
            let (u, v) = wit_r.unwrap();
            let t = f.table();
            let third = t[x.index() ^ a.index()] ^ t[x.index()]
                == t[x0.index() ^ a.index()] ^ t[x0.index()];
            let quad = t[x0.index()]
                ^ t[u.index()]
                ^ t[v.index()]
                ^ t[x0.index() ^ u.index() ^ v.index()];
            if !third || quad != 0 {
                return Err(Error::Internal(format!(
                    "witness re-verification failed at x0={x0}"
                )));
            }
            failures.push(PapnFailure {
                x0,
                derivative_witness: (a, x),
                rodier_witness: (u, v),
            });
        }
    }
    Ok(PapnReport { verdicts, failures })
}

/// Weakly APN: every nontrivial derivative takes at least 2^(n-2) + 1
/// distinct values. Defined for n >= 2.
pub fn is_weakly_apn(f: &Vbf) -> Result<bool> {
    let n = f.n();
    if n < 2 {
        return Err(Error::Precondition(
            "weak APN requires n >= 2".to_string(),
        ));
    }
    let threshold = (1usize << (n - 2)) + 1;
    let t = f.table();
    let size = t.len();
    let mut seen = vec![false; size];
    for a in 1..size {
        seen.fill(false);
        let mut distinct = 0usize;
        for x in 0..size {
            let d = (t[x ^ a] ^ t[x]) as usize;
            if !seen[d] {
                seen[d] = true;
                distinct += 1;
            }
        }
        if distinct < threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// |T_{x,y}|: pairs (u, v) off the curve (u+x)(v+x)(u+v) = 0 with
/// F(u) + F(v) + F(u+v+x) + y = 0. Ordered pairs are counted.
pub fn t_size(f: &Vbf, x: FieldElement, y: FieldElement) -> u64 {
    let t = f.table();
    let size = t.len();
    let xi = x.index();
    let yi = y.0;
    let mut count = 0u64;
    for u in 0..size {
        if u == xi {
            continue;
        }
        for v in 0..size {
            if v == xi || v == u {
                continue;
            }
            if t[u] ^ t[v] ^ t[u ^ v ^ xi] == yi {
                count += 1;
            }
        }
    }
    count
}

/// |S_{x,y}|: points u with F(u) + F(u+x) + y = 0.
pub fn s_size(f: &Vbf, x: FieldElement, y: FieldElement) -> u64 {
    let t = f.table();
    let size = t.len();
    let xi = x.index();
    (0..size).filter(|&u| t[u] ^ t[u ^ xi] == y.0).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(n: u32) -> Arc<Field> {
        Arc::new(Field::new(n).unwrap())
    }

    #[test]
    fn ddt_invariants_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=6 {
            let fd = field(n);
            let f = Vbf::random(&fd, &mut rng);
            let table = ddt(&f).unwrap();
            for a in fd.elements() {
                let row = table.row(a);
                assert_eq!(row.iter().map(|&v| v as u64).sum::<u64>(), fd.size() as u64);
                if !a.is_zero() {
                    assert!(row.iter().all(|&v| v % 2 == 0), "solutions pair up");
                }
            }
            let zero_row = table.row(FieldElement::ZERO);
            assert_eq!(zero_row[0], fd.size() as u32);
            assert!(zero_row[1..].iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn gold_cube_is_apn() {
        let fd = field(5);
        let f = Vbf::from_power(&fd, 3).unwrap();
        assert_eq!(differential_uniformity(&f), 2);
        assert!(is_apn(&f));
    }

    #[test]
    fn x27_uniformity_over_gf64() {
        let fd = field(6);
        let f = Vbf::from_power(&fd, 27).unwrap();
        assert_eq!(differential_uniformity(&f), 12);
        assert!(!is_apn(&f));
    }

    #[test]
    fn linear_square_map_has_trivial_uniformity() {
        for n in 2..=6 {
            let fd = field(n);
            let f = Vbf::from_power(&fd, 2).unwrap();
            assert_eq!(differential_uniformity(&f), fd.size() as u32);
        }
    }

    #[test]
    fn spectrum_totals() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 2..=5 {
            let fd = field(n);
            let f = Vbf::random(&fd, &mut rng);
            let sp = spectrum(&f);
            let pairs = (fd.size() as u64 - 1) * fd.size() as u64;
            assert_eq!(sp.iter().map(|(_, m)| m).sum::<u64>(), pairs);
            assert_eq!(sp.iter().map(|(v, m)| v as u64 * m).sum::<u64>(), pairs);
        }
    }

    #[test]
    fn papn_algorithms_agree_exhaustively_n2() {
        // All 256 functions on GF(4), all points.
        let fd = field(2);
        for code in 0..256u32 {
            let table: Vec<u16> = (0..4).map(|i| ((code >> (2 * i)) & 3) as u16).collect();
            let f = Vbf::from_table(&fd, table).unwrap();
            for x0 in fd.elements() {
                assert_eq!(
                    is_x0_apn_derivative(&f, x0).0,
                    is_x0_apn_rodier(&f, x0).0,
                    "code={code} x0={x0}"
                );
            }
        }
    }

    #[test]
    fn papn_algorithms_agree_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in 3..=4 {
            let fd = field(n);
            for _ in 0..300 {
                let f = Vbf::random(&fd, &mut rng);
                for x0 in fd.elements() {
                    assert_eq!(is_x0_apn_derivative(&f, x0).0, is_x0_apn_rodier(&f, x0).0);
                }
            }
        }
    }

    #[test]
    fn known_papn_spot_claims() {
        // x^14 over GF(16): weakly APN but x0-APN nowhere.
        let fd = field(4);
        let inv = Vbf::from_power(&fd, 14).unwrap();
        assert!(is_weakly_apn(&inv).unwrap());
        let report = papn_set(&inv).unwrap();
        assert!(report.verdicts().iter().all(|&v| !v));

        // x^7 + x^6 over GF(8): 1-APN but not APN.
        let fd = field(3);
        let f = Vbf::from_expression(&fd, "x^7 + x^6").unwrap();
        assert!(is_x0_apn_derivative(&f, FieldElement::ONE).0);
        assert!(is_x0_apn_rodier(&f, FieldElement::ONE).0);
        assert!(!is_apn(&f));
        let sp = spectrum(&f);
        let first = DifferentialSpectrum::from_pairs(&[(0, 31), (2, 22), (4, 3)]);
        let second = DifferentialSpectrum::from_pairs(&[(0, 42), (2, 7), (6, 7)]);
        assert!(sp == first || sp == second, "spectrum {sp}");
    }

    #[test]
    fn x7_over_gf2048_is_0apn_not_weakly_apn() {
        let fd = field(11);
        let f = Vbf::from_power(&fd, 7).unwrap();
        assert!(is_x0_apn_derivative(&f, FieldElement::ZERO).0);
        assert!(!is_weakly_apn(&f).unwrap());
    }

    #[test]
    fn apn_function_passes_everywhere() {
        let fd = field(4);
        let f = Vbf::from_power(&fd, 3).unwrap();
        assert!(is_apn(&f));
        let report = papn_set(&f).unwrap();
        assert!(report.all_pass());
        assert!(is_weakly_apn(&f).unwrap());
    }

    #[test]
    fn power_map_verdicts_constant_on_nonzero_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=5 {
            let fd = field(n);
            for _ in 0..5 {
                let m = rng.gen_range(0..=fd.order() as u64);
                let f = Vbf::from_power(&fd, m).unwrap();
                let report = papn_set(&f).unwrap();
                let nonzero: Vec<bool> = report.verdicts()[1..].to_vec();
                assert!(
                    nonzero.iter().all(|&v| v == nonzero[0]),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn x27_papn_only_at_zero() {
        let fd = field(6);
        let f = Vbf::from_power(&fd, 27).unwrap();
        let report = papn_set(&f).unwrap();
        assert!(report.verdict(FieldElement::ZERO));
        assert!(report.verdicts()[1..].iter().all(|&v| !v));
        // Failures carry verifiable witnesses for all 63 nonzero points.
        assert_eq!(report.failures().len(), 63);
    }

    #[test]
    fn t_and_s_sizes_reference_points() {
        let fd = field(4);
        let f = Vbf::from_power(&fd, 3).unwrap(); // APN, F(0) = 0
        assert_eq!(s_size(&f, FieldElement::ZERO, FieldElement::ZERO), 16);
        assert_eq!(s_size(&f, FieldElement::ZERO, FieldElement::ONE), 0);
        let x = fd.generator();
        assert_eq!(s_size(&f, x, f.eval(x)), 2);
        // T empty at (x0, F(x0)) exactly when x0-APN.
        for x0 in fd.elements() {
            let empty = t_size(&f, x0, f.eval(x0)) == 0;
            assert_eq!(empty, is_x0_apn_rodier(&f, x0).0);
        }
    }

    #[test]
    fn t_size_matches_papn_for_random_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in 2..=4 {
            let fd = field(n);
            for _ in 0..40 {
                let f = Vbf::random(&fd, &mut rng);
                for x0 in fd.elements() {
                    let empty = t_size(&f, x0, f.eval(x0)) == 0;
                    assert_eq!(empty, is_x0_apn_rodier(&f, x0).0, "n={n} x0={x0}");
                }
            }
        }
    }

    #[test]
    fn weakly_apn_rejects_n1() {
        let fd = field(1);
        let f = Vbf::from_power(&fd, 1).unwrap();
        assert!(is_weakly_apn(&f).is_err());
        // On GF(2) everything is reported APN.
        assert!(is_apn(&f));
    }

    #[test]
    fn ddt_csv_shape() {
        let fd = field(2);
        let f = Vbf::from_power(&fd, 3).unwrap();
        let table = ddt(&f).unwrap();
        let mut buf = Vec::new();
        table.to_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("a,b,count\n0x0,0x0,4\n"));
    }
}
