//! Executable verification of the moment identities tying a function to its
//! single-point modifications, plus the monomial/quadratic sweeps.
//!
//! Every check computes its two sides along structurally independent paths:
//! the left side comes from Walsh tables, the right side from direct
//! solution counting or closed-form constants. All comparisons are exact.

use crate::differential::{is_apn, is_x0_apn_derivative, is_x0_apn_rodier, s_size, t_size};
use crate::gf2n::{Field, FieldElement};
use crate::spectral::{d_factor, e_factor, walsh_full, WalshTable};
use crate::vbf::Vbf;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Outcome of one identity check on one parameter instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheckResult {
    pub identity: &'static str,
    pub n: u32,
    pub function: String,
    pub x0: Option<FieldElement>,
    pub eps: Option<FieldElement>,
    pub lhs: i128,
    pub rhs: i128,
    pub pass: bool,
    pub note: Option<String>,
}

impl IdentityCheckResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "identity": self.identity,
            "n": self.n,
            "fn": self.function,
            "x0": self.x0.map(|v| v.to_string()),
            "eps": self.eps.map(|v| v.to_string()),
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
            "pass": self.pass,
            "note": self.note,
        })
    }
}

fn result(
    identity: &'static str,
    f: &Vbf,
    desc: &str,
    x0: Option<FieldElement>,
    eps: Option<FieldElement>,
    lhs: i128,
    rhs: i128,
    pass: bool,
) -> IdentityCheckResult {
    IdentityCheckResult {
        identity,
        n: f.n(),
        function: desc.to_string(),
        x0,
        eps,
        lhs,
        rhs,
        pass,
        note: None,
    }
}

fn require_nonzero(eps: FieldElement) -> Result<()> {
    if eps.is_zero() {
        Err(Error::ZeroModification)
    } else {
        Ok(())
    }
}

fn moment_sum(w: &WalshTable, k: u32) -> i128 {
    w.moment(k).expect("k in 2..=4").value
}

/// Sum over (a, b) of W_F(a,b)^k * E_F(a,b).
fn moment_with_e(
    w: &WalshTable,
    k: u32,
    x0: FieldElement,
    y0: FieldElement,
    eps: FieldElement,
) -> i128 {
    let field = w.field();
    let mut acc: i128 = 0;
    for b in field.elements() {
        if d_factor(field, b, eps) == 0 {
            continue;
        }
        let row = w.row(b);
        for (a, &wv) in row.iter().enumerate() {
            let e = e_factor(field, FieldElement(a as u16), b, x0, y0, eps);
            acc += (wv as i128).pow(k) * e as i128;
        }
    }
    acc
}

fn delta0(v: FieldElement) -> i128 {
    if v.is_zero() {
        1
    } else {
        0
    }
}

/// Entrywise check of the Walsh difference rule
/// W_F'(a,b) = W_F(a,b) - E_F(a,b), with both tables computed independently.
pub fn check_walsh_diff(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
    eps: FieldElement,
) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    let field = f.field();
    let y0 = f.eval(x0);
    let w = walsh_full(f)?;
    let w_mod = walsh_full(&f.modify_at(x0, eps)?)?;
    let mut mismatches: i128 = 0;
    let mut note = None;
    for a in field.elements() {
        for b in field.elements() {
            if w_mod.get(a, b) != w.get(a, b) - e_factor(field, a, b, x0, y0, eps) {
                if note.is_none() {
                    note = Some(format!("first mismatch at (a={a}, b={b})"));
                }
                mismatches += 1;
            }
        }
    }
    let mut r = result(
        "walsh-diff",
        f,
        desc,
        Some(x0),
        Some(eps),
        mismatches,
        0,
        mismatches == 0,
    );
    r.note = note;
    Ok(r)
}

/// Pointwise power-reduction rules for the modification factors:
/// E^(2m) = 2^(2m-1) D and E^(2m+1) = 2^(2m) E, for every (a, b).
pub fn check_power_simplification(
    field: &Field,
    x0: FieldElement,
    y0: FieldElement,
    eps: FieldElement,
    m: u32,
) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    let mut mismatches: i128 = 0;
    for a in field.elements() {
        for b in field.elements() {
            let e = e_factor(field, a, b, x0, y0, eps) as i128;
            let d = d_factor(field, b, eps) as i128;
            if e.pow(2 * m) != (1i128 << (2 * m - 1)) * d {
                mismatches += 1;
            }
            if e.pow(2 * m + 1) != (1i128 << (2 * m)) * e {
                mismatches += 1;
            }
        }
    }
    Ok(IdentityCheckResult {
        identity: "power-simplification",
        n: field.n(),
        function: format!("factors(m={m})"),
        x0: Some(x0),
        eps: Some(eps),
        lhs: mismatches,
        rhs: 0,
        pass: mismatches == 0,
        note: None,
    })
}

/// Fourth-moment drop of a modification:
/// (1/4) sum (W_F^4 - W_F'^4) = sum W_F^3 E_F - (3*2^(3n) - 2^(2n+1)).
pub fn check_thm_4thpower_i(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
    eps: FieldElement,
) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    let n = f.n();
    let y0 = f.eval(x0);
    let w = walsh_full(f)?;
    let w_mod = walsh_full(&f.modify_at(x0, eps)?)?;
    let diff4 = moment_sum(&w, 4) - moment_sum(&w_mod, 4);
    if diff4 % 4 != 0 {
        let mut r = result("thm-4thpower-i", f, desc, Some(x0), Some(eps), diff4, 0, false);
        r.note = Some("fourth-moment difference not divisible by 4".to_string());
        return Ok(r);
    }
    let lhs = diff4 / 4;
    let rhs = moment_with_e(&w, 3, x0, y0, eps)
        - (3 * (1i128 << (3 * n)) - (1i128 << (2 * n + 1)));
    Ok(result(
        "thm-4thpower-i",
        f,
        desc,
        Some(x0),
        Some(eps),
        lhs,
        rhs,
        lhs == rhs,
    ))
}

/// Third-moment drop of a modification, with both Kronecker corrections:
/// sum (W_F^3 - W_F'^3) = 3 sum W_F^2 E_F
///   - 3*2^(2n+1) (d0(F(0)) - d0(eps + F(0)))
///   + 2^(2n+2) d0(x0) (d0(y0) - d0(y1)).
pub fn check_thm_4thpower_ii(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
    eps: FieldElement,
) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    let n = f.n();
    let y0 = f.eval(x0);
    let y1 = y0 + eps;
    let f0 = f.eval(FieldElement::ZERO);
    let w = walsh_full(f)?;
    let w_mod = walsh_full(&f.modify_at(x0, eps)?)?;
    let lhs = moment_sum(&w, 3) - moment_sum(&w_mod, 3);
    let rhs = 3 * moment_with_e(&w, 2, x0, y0, eps)
        - 3 * (1i128 << (2 * n + 1)) * (delta0(f0) - delta0(eps + f0))
        + (1i128 << (2 * n + 2)) * delta0(x0) * (delta0(y0) - delta0(y1));
    Ok(result(
        "thm-4thpower-ii",
        f,
        desc,
        Some(x0),
        Some(eps),
        lhs,
        rhs,
        lhs == rhs,
    ))
}

/// Moment sums against the off-curve/derivative witness counts:
/// (i)  sum W^3 E = 2^(2n) (3*2^n - 2 + |T_{x0,y0}| - |T_{x0,y1}|)
/// (ii) sum W^2 E = 2^(2n) (|S_{x0,y0}| - |S_{x0,y1}|).
pub fn check_mainthm(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
    eps: FieldElement,
) -> Result<(IdentityCheckResult, IdentityCheckResult)> {
    require_nonzero(eps)?;
    let n = f.n();
    let y0 = f.eval(x0);
    let y1 = y0 + eps;
    let w = walsh_full(f)?;
    let t0 = t_size(f, x0, y0) as i128;
    let t1 = t_size(f, x0, y1) as i128;
    let s0 = s_size(f, x0, y0) as i128;
    let s1 = s_size(f, x0, y1) as i128;
    let pow2n = 1i128 << (2 * n);

    let lhs_i = moment_with_e(&w, 3, x0, y0, eps);
    let rhs_i = pow2n * (3 * (1i128 << n) - 2 + t0 - t1);
    let lhs_ii = moment_with_e(&w, 2, x0, y0, eps);
    let rhs_ii = pow2n * (s0 - s1);

    Ok((
        result("mainthm-i", f, desc, Some(x0), Some(eps), lhs_i, rhs_i, lhs_i == rhs_i),
        result(
            "mainthm-ii",
            f,
            desc,
            Some(x0),
            Some(eps),
            lhs_ii,
            rhs_ii,
            lhs_ii == rhs_ii,
        ),
    ))
}

/// The local-global bridge in quantitative form:
/// sum (W_F^4 - W_F'^4) = 2^(2n+2) (|T_{x0,y0}| - |T_{x0,y1}|),
/// which contains the equivalence "fourth moments equal iff |T| equal".
pub fn check_local_global_equiv(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
    eps: FieldElement,
) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    let n = f.n();
    let y0 = f.eval(x0);
    let y1 = y0 + eps;
    let w = walsh_full(f)?;
    let w_mod = walsh_full(&f.modify_at(x0, eps)?)?;
    let lhs = moment_sum(&w, 4) - moment_sum(&w_mod, 4);
    let t0 = t_size(f, x0, y0) as i128;
    let t1 = t_size(f, x0, y1) as i128;
    let rhs = (1i128 << (2 * n + 2)) * (t0 - t1);
    let mut r = result(
        "local-global-equiv",
        f,
        desc,
        Some(x0),
        Some(eps),
        lhs,
        rhs,
        lhs == rhs,
    );
    if (lhs == 0) != (t0 == t1) {
        r.pass = false;
        r.note = Some("zero fourth-moment difference disagrees with |T| equality".to_string());
    }
    Ok(r)
}

/// Twisted-third-moment characterization of x0-APN: the sum equals
/// 2^(2n+1)(3*2^(n-1) - 1) exactly when F is x0-APN. Cross-checked against
/// the off-curve scan.
pub fn check_sec3_characterization(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
) -> Result<IdentityCheckResult> {
    let n = f.n();
    let w = walsh_full(f)?;
    let lhs = w.twisted_moment(3, x0, f.eval(x0))?.value;
    let rhs = 3 * (1i128 << (3 * n)) - (1i128 << (2 * n + 1));
    let papn = is_x0_apn_rodier(f, x0).0;
    let mut r = result("sec3-characterization", f, desc, Some(x0), None, lhs, rhs, true);
    r.pass = (lhs == rhs) == papn;
    r.note = Some(format!("x0-APN by off-curve scan: {papn}"));
    Ok(r)
}

/// For APN F with F(0) = 0, the (0, eps)-modification stays APN iff
/// sum W_F^3 (-1)^(Tr(b eps)) = 0. Both sides computed independently.
pub fn check_cor_cond(f: &Vbf, desc: &str, eps: FieldElement) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    if !f.eval(FieldElement::ZERO).is_zero() {
        return Err(Error::Precondition("corollary requires F(0) = 0".to_string()));
    }
    if !is_apn(f) {
        return Err(Error::Precondition("corollary requires an APN input".to_string()));
    }
    let w = walsh_full(f)?;
    let lhs = w.twisted_moment(3, FieldElement::ZERO, eps)?.value;
    let modified_apn = is_apn(&f.modify_at(FieldElement::ZERO, eps)?);
    let mut r = result(
        "cor-cond",
        f,
        desc,
        Some(FieldElement::ZERO),
        Some(eps),
        lhs,
        0,
        (lhs == 0) == modified_apn,
    );
    r.note = Some(format!("modified map APN: {modified_apn}"));
    Ok(r)
}

/// For any F with F(0) = 0: sum W_F^2 (-1)^(Tr(b eps)) = 0 for eps != 0.
pub fn check_w2_corollary(f: &Vbf, desc: &str, eps: FieldElement) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    if !f.eval(FieldElement::ZERO).is_zero() {
        return Err(Error::Precondition("corollary requires F(0) = 0".to_string()));
    }
    let w = walsh_full(f)?;
    let lhs = w.twisted_moment(2, FieldElement::ZERO, eps)?.value;
    Ok(result(
        "w2-corollary",
        f,
        desc,
        Some(FieldElement::ZERO),
        Some(eps),
        lhs,
        0,
        lhs == 0,
    ))
}

/// Third-moment drop in S-count form, case F(0) = 0 != x0:
/// sum (W^3 - W'^3) = 3*2^(2n)(|S_{x0,y0}| - |S_{x0,y1}|) - 3*2^(2n+1).
pub fn check_wcube_a(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
    eps: FieldElement,
) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    if !f.eval(FieldElement::ZERO).is_zero() || x0.is_zero() {
        return Err(Error::Precondition(
            "case (a) requires F(0) = 0 and x0 != 0".to_string(),
        ));
    }
    let n = f.n();
    let y0 = f.eval(x0);
    let y1 = y0 + eps;
    let w = walsh_full(f)?;
    let w_mod = walsh_full(&f.modify_at(x0, eps)?)?;
    let lhs = moment_sum(&w, 3) - moment_sum(&w_mod, 3);
    let s0 = s_size(f, x0, y0) as i128;
    let s1 = s_size(f, x0, y1) as i128;
    let rhs = 3 * (1i128 << (2 * n)) * (s0 - s1) - 3 * (1i128 << (2 * n + 1));
    Ok(result("wcube-a", f, desc, Some(x0), Some(eps), lhs, rhs, lhs == rhs))
}

/// Case F(0) = 0 = x0: the drop is the APN constant 2^(2n+1)(3*2^(n-1)-1),
/// and the S-count form must agree with it.
pub fn check_wcube_b(f: &Vbf, desc: &str, eps: FieldElement) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    if !f.eval(FieldElement::ZERO).is_zero() {
        return Err(Error::Precondition("case (b) requires F(0) = 0".to_string()));
    }
    let n = f.n();
    let x0 = FieldElement::ZERO;
    let y1 = eps;
    let w = walsh_full(f)?;
    let w_mod = walsh_full(&f.modify_at(x0, eps)?)?;
    let lhs = moment_sum(&w, 3) - moment_sum(&w_mod, 3);
    let rhs = 3 * (1i128 << (3 * n)) - (1i128 << (2 * n + 1));
    let s0 = s_size(f, x0, FieldElement::ZERO) as i128;
    let s1 = s_size(f, x0, y1) as i128;
    let s_form = 3 * (1i128 << (2 * n)) * (s0 - s1) - (1i128 << (2 * n + 1));
    let mut r = result("wcube-b", f, desc, Some(x0), Some(eps), lhs, rhs, lhs == rhs);
    if s_form != rhs {
        r.pass = false;
        r.note = Some("S-count form disagrees with the constant form".to_string());
    }
    Ok(r)
}

/// APN F with F(0) = 0 != x0: the modified third moment is
/// 2^(2n+1)(3*2^(n-1)-1) + 3*2^(2n) |S_{x0,y1}|.
pub fn check_wcube_c(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
    eps: FieldElement,
) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    if !f.eval(FieldElement::ZERO).is_zero() || x0.is_zero() {
        return Err(Error::Precondition(
            "case (c) requires F(0) = 0 and x0 != 0".to_string(),
        ));
    }
    if !is_apn(f) {
        return Err(Error::Precondition("case (c) requires an APN input".to_string()));
    }
    let n = f.n();
    let y1 = f.eval(x0) + eps;
    let w_mod = walsh_full(&f.modify_at(x0, eps)?)?;
    let lhs = moment_sum(&w_mod, 3);
    let s1 = s_size(f, x0, y1) as i128;
    let rhs = 3 * (1i128 << (3 * n)) - (1i128 << (2 * n + 1)) + 3 * (1i128 << (2 * n)) * s1;
    Ok(result("wcube-c", f, desc, Some(x0), Some(eps), lhs, rhs, lhs == rhs))
}

/// APN F with F(0) = 0 = x0: the modified third moment vanishes exactly.
pub fn check_wcube_d(f: &Vbf, desc: &str, eps: FieldElement) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    if !f.eval(FieldElement::ZERO).is_zero() {
        return Err(Error::Precondition("case (d) requires F(0) = 0".to_string()));
    }
    if !is_apn(f) {
        return Err(Error::Precondition("case (d) requires an APN input".to_string()));
    }
    let w_mod = walsh_full(&f.modify_at(FieldElement::ZERO, eps)?)?;
    let lhs = moment_sum(&w_mod, 3);
    Ok(result(
        "wcube-d",
        f,
        desc,
        Some(FieldElement::ZERO),
        Some(eps),
        lhs,
        0,
        lhs == 0,
    ))
}

/// If F is APN and its modification F' is x0-APN, then F' must be APN.
/// Reports whether the antecedent fired; a vacuous case still passes but is
/// flagged, because the strengthened conjecture predicts all cases vacuous.
pub fn check_local_global_implication(
    f: &Vbf,
    desc: &str,
    x0: FieldElement,
    eps: FieldElement,
) -> Result<IdentityCheckResult> {
    require_nonzero(eps)?;
    if !is_apn(f) {
        return Err(Error::Precondition(
            "local-global implication requires an APN input".to_string(),
        ));
    }
    let modified = f.modify_at(x0, eps)?;
    let papn = is_x0_apn_rodier(&modified, x0).0;
    let apn = is_apn(&modified);
    let mut r = result(
        "local-global-implication",
        f,
        desc,
        Some(x0),
        Some(eps),
        papn as i128,
        apn as i128,
        !papn || apn,
    );
    r.note = Some(if papn {
        "antecedent fired".to_string()
    } else {
        "vacuous".to_string()
    });
    Ok(r)
}

/// Image of the quadruple sums through x0.
#[derive(Debug, Clone)]
pub struct ProbeResult {
    /// True iff {F(x0)+F(u)+F(v)+F(x0+u+v) : u,v} covers the whole field,
    /// i.e. no (x0, eps)-modification of F is x0-APN.
    pub full_image: bool,
    /// Field elements missing from the image. Every nonzero missing eps
    /// yields a modification that IS x0-APN (a conjecture counterexample
    /// when F is APN).
    pub missing: Vec<FieldElement>,
}

/// Computes the quadruple-sum image at x0 by exhaustive (u, v) scan.
pub fn conjecture_probe(f: &Vbf, x0: FieldElement) -> ProbeResult {
    let t = f.table();
    let size = t.len();
    let x0i = x0.index();
    let y0 = t[x0i];
    let mut seen = vec![false; size];
    for u in 0..size {
        for v in 0..size {
            seen[(y0 ^ t[u] ^ t[v] ^ t[x0i ^ u ^ v]) as usize] = true;
        }
    }
    let missing: Vec<FieldElement> = (0..size)
        .filter(|&e| !seen[e])
        .map(|e| FieldElement(e as u16))
        .collect();
    ProbeResult {
        full_image: missing.is_empty(),
        missing,
    }
}

/// Sweep report for the power-map theorems.
#[derive(Debug, Clone)]
pub struct PowerSweepReport {
    pub checked: u64,
    /// Exponents found 1-APN (all of them must be APN).
    pub one_apn: u64,
    /// (n, exponent) pairs violating "1-APN implies APN" (must be empty).
    pub violations: Vec<(u32, u64)>,
}

/// Confirms over every exponent and every degree up to `n_max` that a power
/// map which is partially APN at 1 is APN.
pub fn check_power_1apn_theorem(n_max: u32) -> Result<PowerSweepReport> {
    let mut report = PowerSweepReport {
        checked: 0,
        one_apn: 0,
        violations: Vec::new(),
    };
    for n in 1..=n_max {
        let field = Arc::new(Field::new(n)?);
        for m in 0..=field.order() as u64 {
            let f = Vbf::from_power(&field, m)?;
            report.checked += 1;
            if is_x0_apn_derivative(&f, FieldElement::ONE).0 {
                report.one_apn += 1;
                if !is_apn(&f) {
                    report.violations.push((n, m));
                }
            }
        }
    }
    Ok(report)
}

/// All-or-nothing report for a quadratic function.
#[derive(Debug, Clone)]
pub struct QuadraticPropReport {
    pub apn: bool,
    /// True iff every point verdict equals the global APN verdict.
    pub all_or_nothing: bool,
}

/// For quadratic F, x0-APN at any point must coincide with APN.
pub fn check_quadratic_prop(f: &Vbf) -> Result<QuadraticPropReport> {
    if !f.is_quadratic() {
        return Err(Error::Precondition(
            "quadratic proposition requires a quadratic input".to_string(),
        ));
    }
    let apn = is_apn(f);
    let report = crate::differential::papn_set(f)?;
    Ok(QuadraticPropReport {
        apn,
        all_or_nothing: report.verdicts().iter().all(|&v| v == apn),
    })
}

/// Configuration for the randomized identity suite.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub ns: Vec<u32>,
    /// Random functions per degree.
    pub trials: u32,
    pub seed: u64,
    /// Degrees up to this bound run every (x0, eps) pair per function.
    pub exhaustive_pairs_up_to_n: u32,
    /// Pairs sampled per function above that bound.
    pub sampled_pairs: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            ns: vec![2, 3, 4, 5],
            trials: 100,
            seed: 0,
            exhaustive_pairs_up_to_n: 3,
            sampled_pairs: 4,
        }
    }
}

/// Aggregate outcome of a suite run.
#[derive(Debug, Clone, Default)]
pub struct SuiteSummary {
    pub seed: u64,
    pub total: u64,
    pub failed: u64,
    pub by_identity: BTreeMap<&'static str, (u64, u64)>,
}

impl SuiteSummary {
    fn record(&mut self, r: &IdentityCheckResult) {
        self.total += 1;
        let entry = self.by_identity.entry(r.identity).or_insert((0, 0));
        entry.0 += 1;
        if !r.pass {
            self.failed += 1;
            entry.1 += 1;
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.seed,
            "total": self.total,
            "failed": self.failed,
            "by_identity": self
                .by_identity
                .iter()
                .map(|(id, (runs, fails))| {
                    (id.to_string(), serde_json::json!({"runs": runs, "failed": fails}))
                })
                .collect::<serde_json::Map<String, serde_json::Value>>(),
        })
    }
}

fn pair_seed(seed: u64, n: u32, trial: u32) -> u64 {
    // splitmix-style mixing for independent per-trial streams
    let mut z = seed
        .wrapping_add((n as u64) << 32)
        .wrapping_add(trial as u64)
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs the full identity suite. Each instance result is passed to `sink`
/// as it is produced; the summary counts passes and failures per identity.
pub fn run_identity_suite(
    cfg: &SuiteConfig,
    sink: &mut dyn FnMut(&IdentityCheckResult),
) -> Result<SuiteSummary> {
    let mut summary = SuiteSummary {
        seed: cfg.seed,
        ..SuiteSummary::default()
    };
    for &n in &cfg.ns {
        let field = Arc::new(Field::new(n)?);
        let cube = Vbf::from_power(&field, 3)?;
        for trial in 0..cfg.trials {
            let mut rng = ChaCha8Rng::seed_from_u64(pair_seed(cfg.seed, n, trial));
            let f = Vbf::random(&field, &mut rng);
            let desc = format!("random(n={n},seed={},trial={trial})", cfg.seed);
            let mut f0 = f.clone();
            let f0 = if f0.eval(FieldElement::ZERO).is_zero() {
                f0
            } else {
                let v = f0.eval(FieldElement::ZERO);
                f0 = f0.modify_at(FieldElement::ZERO, v)?;
                f0
            };
            let desc0 = format!("{desc}|F(0):=0");

            let pairs = sample_pairs(&field, n <= cfg.exhaustive_pairs_up_to_n, cfg.sampled_pairs, &mut rng);

            for &(x0, eps) in &pairs {
                let y0 = f.eval(x0);
                let mut emit = |r: IdentityCheckResult| {
                    summary.record(&r);
                    sink(&r);
                };
                emit(check_walsh_diff(&f, &desc, x0, eps)?);
                for m in 1..=3 {
                    emit(check_power_simplification(&field, x0, y0, eps, m)?);
                }
                emit(check_thm_4thpower_i(&f, &desc, x0, eps)?);
                emit(check_thm_4thpower_ii(&f, &desc, x0, eps)?);
                let (mi, mii) = check_mainthm(&f, &desc, x0, eps)?;
                emit(mi);
                emit(mii);
                emit(check_local_global_equiv(&f, &desc, x0, eps)?);
                emit(check_w2_corollary(&f0, &desc0, eps)?);
                if x0.is_zero() {
                    emit(check_wcube_b(&f0, &desc0, eps)?);
                    emit(check_cor_cond(&cube, "x^3", eps)?);
                    emit(check_wcube_d(&cube, "x^3", eps)?);
                } else {
                    emit(check_wcube_a(&f0, &desc0, x0, eps)?);
                    emit(check_wcube_c(&cube, "x^3", x0, eps)?);
                }
                emit(check_local_global_implication(&cube, "x^3", x0, eps)?);
            }

            // Point-only characterization, all points.
            for x0 in field.elements() {
                let r = check_sec3_characterization(&f, &desc, x0)?;
                summary.record(&r);
                sink(&r);
            }
        }
    }
    Ok(summary)
}

fn sample_pairs(
    field: &Field,
    exhaustive: bool,
    sampled: u32,
    rng: &mut ChaCha8Rng,
) -> Vec<(FieldElement, FieldElement)> {
    use rand::Rng;
    if exhaustive {
        let mut out = Vec::new();
        for x0 in field.elements() {
            for eps in field.elements().skip(1) {
                out.push((x0, eps));
            }
        }
        out
    } else {
        (0..sampled)
            .map(|_| {
                (
                    FieldElement(rng.gen_range(0..field.size()) as u16),
                    FieldElement(rng.gen_range(1..field.size()) as u16),
                )
            })
            .collect()
    }
}
