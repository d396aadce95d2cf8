use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_traits::ToPrimitive;

use super::report::{CheckOutcome, RunReport};
use super::table::{emit_series_rows, emit_table, parse_table, CoefficientTable};
use super::CliError;
use crate::arith::is_prime;
use crate::digits::{
    apply_word, chain_residual, chain_root, commutator_h, commutator_h_closed, decompose,
    denominator_chain_check, digits_of, f_chain, f_map, f_shift, sigma_shift, word_of,
    DenominatorCase, OmegaTag,
};
use crate::modcurve::{
    check_reduced_number, curve_data, enumerate_fixed_points, scan_candidates, verify_counts,
    FixedPoint, PointKind, ReducedNumberCheck,
};
use crate::modforms::{
    adjudicate_constant, check_coefficient_relation, check_phi_relations, g_series, j_series,
    p_series, phi_fricke_series, phi_series, shift_constant_against, AlphaTable, GenusZeroPrime,
    ModformsError, SupersingularPrime,
};
use crate::numeric::{find_uhat, in_fundamental_domain, verify_vanishing_sum, Precision, VANISHING_SUM_ORDER_PER_P};
use crate::qseries::LaurentSeries;

/// Chains `n, p n, ..., p^k n` are checked for `n ≤ CHAIN_MAX_N`, `k ≤ CHAIN_MAX_K`.
const CHAIN_MAX_N: usize = 20;
const CHAIN_MAX_K: u32 = 3;
/// Default `N` for `verify` on computed tables.
const DEFAULT_VERIFY_ORDER: usize = 200;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn genus_zero(p: Option<u32>, what: &str) -> Result<GenusZeroPrime, CliError> {
    let p = p.ok_or_else(|| usage(format!("{what} needs --p")))?;
    GenusZeroPrime::new(p).map_err(|_| {
        usage(format!("{what} is only constructed for genus-zero primes 2, 3, 5, 7, 13 (got {p})"))
    })
}

/// Reads an α-table file, checking its prime against `expected_p`.
pub fn load_alpha_table(path: &Path, expected_p: Option<u32>) -> Result<AlphaTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let table = parse_table(&text).map_err(|source| CliError::Table { path: path.to_path_buf(), source })?;
    if let Some(p) = expected_p {
        if p != table.p {
            return Err(usage(format!("--p {p} does not match table prime {}", table.p)));
        }
    }
    let sp = SupersingularPrime::new(table.p).map_err(|e| usage(e.to_string()))?;
    AlphaTable::ingested(sp, table.entries).map_err(|e| usage(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpandObject {
    Phi,
    PhiFricke,
    G,
    J,
    PSeries,
}

impl FromStr for ExpandObject {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "phi" => Ok(ExpandObject::Phi),
            "phi-fricke" => Ok(ExpandObject::PhiFricke),
            "g" => Ok(ExpandObject::G),
            "j" => Ok(ExpandObject::J),
            "p-series" => Ok(ExpandObject::PSeries),
            _ => Err(format!("unknown object '{s}' (phi, phi-fricke, g, j, p-series)")),
        }
    }
}

impl ExpandObject {
    fn name(&self) -> &'static str {
        match self {
            ExpandObject::Phi => "phi",
            ExpandObject::PhiFricke => "phi-fricke",
            ExpandObject::G => "g",
            ExpandObject::J => "j",
            ExpandObject::PSeries => "p-series",
        }
    }
}

pub struct ExpandOutput {
    pub report: RunReport,
    /// `n value` rows; for `g` preceded by a `p N` header so the output
    /// loads as a table.
    pub rows: String,
}

/// The α-table from a file when given, otherwise computed to `order`.
fn alpha_source(p: Option<u32>, order: usize, alpha_file: Option<&Path>, what: &str) -> Result<(AlphaTable, &'static str), CliError> {
    match alpha_file {
        Some(path) => Ok((load_alpha_table(path, p)?, "file")),
        None => Ok((g_series(genus_zero(p, what)?, order), "computed")),
    }
}

pub fn cmd_expand(object: ExpandObject, p: Option<u32>, order: usize, alpha_file: Option<&Path>) -> Result<ExpandOutput, CliError> {
    let start = Instant::now();
    let mut report = RunReport::new("expand");
    report.param("object", object.name());
    if let Some(p) = p {
        report.param("p", p);
    }
    report.param("order", order);
    if alpha_file.is_some() && !matches!(object, ExpandObject::G | ExpandObject::PSeries) {
        return Err(usage(format!("--alpha-file applies to g and p-series, not {}", object.name())));
    }
    if order == 0 && matches!(object, ExpandObject::Phi | ExpandObject::J | ExpandObject::PSeries) {
        return Err(usage("--order must be at least 1"));
    }
    let (series, header): (LaurentSeries, Option<String>) = match object {
        ExpandObject::J => (j_series(order), None),
        ExpandObject::Phi => (phi_series(genus_zero(p, "phi")?, order), None),
        ExpandObject::PhiFricke => (phi_fricke_series(genus_zero(p, "phi-fricke")?, order), None),
        ExpandObject::G => {
            let (table, source) = alpha_source(p, order, alpha_file, "g")?;
            report.param("source", source);
            if table.order() < order {
                return Err(usage(format!("table ends at {}, below --order {order}", table.order())));
            }
            let s = table.series().truncate(order as i64);
            (s, Some(format!("{} {}\n", table.p().get(), order)))
        }
        ExpandObject::PSeries => {
            let needed = order * p.unwrap_or(1) as usize;
            let (table, source) = alpha_source(p, needed, alpha_file, "p-series")?;
            report.param("source", source);
            let needed = order * table.p().get() as usize;
            if table.order() < needed {
                return Err(usage(format!("p-series to order {order} needs alpha up to {needed}, table ends at {}", table.order())));
            }
            (p_series(&table, order)?, None)
        }
    };
    report.value("lead", series.lead());
    report.value("rows", series.coeffs().len());
    report.value("integral", series.is_integral());
    report.timing("total", start.elapsed());
    let mut rows = header.unwrap_or_default();
    rows.push_str(&emit_series_rows(&series));
    Ok(ExpandOutput { report, rows })
}

fn fail_at(n: impl std::fmt::Display) -> CheckOutcome {
    CheckOutcome::Fail(format!("first failing index {n}"))
}

fn identity_outcome(r: Result<usize, ModformsError>) -> Result<CheckOutcome, CliError> {
    match r {
        Ok(_) => Ok(CheckOutcome::Pass),
        Err(ModformsError::IdentityViolated { n, .. }) => Ok(fail_at(n)),
        Err(e) => Err(e.into()),
    }
}

/// `(n, k)` with `p ∤ n`, `n ≤ 20`, `k ≤ 3` and `p^k n` inside the table.
fn chain_pairs(p: usize, table_order: usize) -> Vec<(usize, u32)> {
    let mut pairs = Vec::new();
    for n in (1..=CHAIN_MAX_N).filter(|n| n % p != 0) {
        for k in 1..=CHAIN_MAX_K {
            if n * p.pow(k) <= table_order {
                pairs.push((n, k));
            }
        }
    }
    pairs
}

/// Runs the exact identity suite for a supersingular prime.
pub fn cmd_verify(p: u32, order: Option<usize>, alpha_file: Option<&Path>) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let sp = SupersingularPrime::new(p).map_err(|e| usage(e.to_string()))?;
    let pz = p as usize;
    let mut report = RunReport::new("verify");
    report.param("p", p);

    let (table, source) = match (alpha_file, sp.genus_zero()) {
        (Some(path), _) => (load_alpha_table(path, Some(p))?, "file"),
        (None, Some(g)) => {
            let n = order.unwrap_or(DEFAULT_VERIFY_ORDER);
            let len = (n * pz).max(CHAIN_MAX_N * pz.pow(CHAIN_MAX_K));
            (g_series(g, len), "computed")
        }
        (None, None) => {
            return Err(usage(format!("X_0({p}) has positive genus: supply its alpha table with --alpha-file")));
        }
    };
    let reach = table.order() / pz;
    let n = order.unwrap_or(if source == "file" { reach } else { DEFAULT_VERIFY_ORDER });
    if n == 0 {
        return Err(usage("--order must be at least 1"));
    }
    if n > reach {
        return Err(usage(format!("order {n} needs alpha up to {}, table ends at {}", n * pz, table.order())));
    }
    report.param("order", n);
    report.param("source", source);
    report.param("table_order", table.order());

    let j = j_series(n.max(reach));

    // P_p - j constant, and the closed form of the constant
    match shift_constant_against(&table, &j, n) {
        Ok(shift) => {
            report.check("constant_difference", CheckOutcome::Pass);
            let adj = adjudicate_constant(&table, &shift);
            report.check_bool("constant_plus_form", adj.plus_holds, || format!("computed {} vs {}", adj.computed, adj.plus_form));
            report.check_bool("constant_minus_form_rejected", !adj.minus_holds, || "minus form also holds".into());
            report.value("shift_constant", &shift.value);
            report.value("constant_plus_form", &adj.plus_form);
            report.value("constant_minus_form", &adj.minus_form);
            report.value("constant_minus_form_holds", adj.minus_holds);
        }
        Err(ModformsError::IdentityViolated { n, .. }) => report.check("constant_difference", fail_at(n)),
        Err(e) => return Err(e.into()),
    }

    let outcome = identity_outcome(check_coefficient_relation(&table, &j, reach))?;
    report.check("coefficient_relation", outcome);
    report.value("coefficient_relation_range", format!("1..={reach}"));

    if let (Some(g), "computed") = (sp.genus_zero(), source) {
        let outcome = identity_outcome(check_phi_relations(g, &table, n))?;
        report.check("phi_relation", outcome);
    }

    let pairs = chain_pairs(pz, table.order());
    let mut chain_fail = None;
    let mut fmap_fail = None;
    let mut fmap_count = 0;
    let mut div_fail = None;
    let mut ident_fail = None;
    let mut swapped_fail = 0;
    let mut cases = [0usize; 4];
    for &(m, k) in &pairs {
        let (lhs, rhs) = chain_residual(&table, &j, m, k)?;
        if lhs != rhs && chain_fail.is_none() {
            chain_fail = Some(format!("n={m} k={k}"));
        }
        if k == 2 {
            fmap_count += 1;
            if f_map(&table, &j, m)? != j.coeff((m * pz) as i64)? && fmap_fail.is_none() {
                fmap_fail = Some(m);
            }
        }
        let rep = denominator_chain_check(&table, &j, m, k)?;
        if !rep.divisibility_holds && div_fail.is_none() {
            div_fail = Some(format!("n={m} k={}", rep.first_failure.unwrap_or(k)));
        }
        if !rep.identity_holds && ident_fail.is_none() {
            ident_fail = Some(format!("n={m} k={k}"));
        }
        if !rep.swapped_sign_identity_holds {
            swapped_fail += 1;
        }
        cases[match rep.case {
            DenominatorCase::Integral => 0,
            DenominatorCase::Equal => 1,
            DenominatorCase::Scaled => 2,
            DenominatorCase::Mixed => 3,
        }] += 1;
    }
    report.check("chain", chain_fail.map_or(CheckOutcome::Pass, fail_at));
    report.check("f_map", fmap_fail.map_or(CheckOutcome::Pass, fail_at));
    report.check("denominator_divisibility", div_fail.map_or(CheckOutcome::Pass, fail_at));
    report.check("denominator_identity", ident_fail.map_or(CheckOutcome::Pass, fail_at));
    report.value("chain_cases", pairs.len());
    report.value("f_map_cases", fmap_count);
    report.value(
        "denominator_cases",
        format!("integral:{} equal:{} scaled:{} mixed:{}", cases[0], cases[1], cases[2], cases[3]),
    );
    report.value("swapped_sign_identity_failures", swapped_fail);

    let parts = decompose(&table);
    report.value("alpha_0", &table.entries()[0]);
    report.value("table_integral", table.is_integral());
    report.value(
        "omega",
        match parts.first().map(|d| d.omega) {
            Some(OmegaTag::Symbolic) => "symbolic",
            _ => "assumed_zero",
        },
    );
    report.timing("total", start.elapsed());
    Ok(report)
}

fn describe_point(fp: &FixedPoint, p: u32) -> String {
    let kind = match fp.kind {
        PointKind::Tau0 => "tau0",
        PointKind::Tau1 => "tau1",
        PointKind::Plus => "plus",
        PointKind::Minus => "minus",
        PointKind::Special => "special",
    };
    let class = match fp.disc_class {
        Some(crate::modcurve::DiscClass::Field) => "field",
        Some(crate::modcurve::DiscClass::Order) => "order",
        None => "none",
    };
    let prim = fp.form.primitive_part();
    let mut s = format!(
        "kind={kind} a={} b={} form={} content={} disc={} class={class} reduced={} coset={}",
        fp.a,
        fp.b,
        fp.form,
        fp.form.content(),
        prim.discriminant(),
        fp.reduced,
        fp.coset
    );
    if matches!(fp.kind, PointKind::Plus | PointKind::Minus) {
        let formula = match check_reduced_number(fp, p) {
            ReducedNumberCheck::Matches => "matches",
            ReducedNumberCheck::Mismatch => "mismatch",
            ReducedNumberCheck::NotDirectlyReduced => "not_directly_reduced",
            ReducedNumberCheck::NoFormula => "no_formula",
        };
        s.push_str(&format!(" reduced_number={formula}"));
    }
    s
}

/// Fixed points of the Fricke involution and the class-number counts.
pub fn cmd_curve(p: u32) -> Result<RunReport, CliError> {
    let start = Instant::now();
    SupersingularPrime::new(p).map_err(|e| usage(e.to_string()))?;
    let mut report = RunReport::new("curve");
    report.param("p", p);
    let curve = curve_data(p)?;
    let points = enumerate_fixed_points(p)?;
    report.value("genus", curve.g);
    report.value("quotient_genus", curve.gamma);
    if p == 2 {
        let expected = 2 * curve.g as usize + 2;
        report.check_bool("points", points.len() == expected, || format!("{} points, expected {expected}", points.len()));
    } else {
        let counts = verify_counts(p)?;
        for c in &counts.checks {
            report.check_bool(c.name, c.passed(), || format!("expected {} got {}", c.expected, c.actual));
        }
        report.value("h_K", counts.counts.h_k);
        report.value("h_2", counts.counts.h_2);
        report.value("candidates", scan_candidates(p)?.len());
        report.value("field_points", counts.field_points);
        report.value("order_points", counts.order_points);
    }
    report.value("points", points.len());
    report.value("weierstrass_count", curve.weierstrass_count.map_or("none".to_string(), |w| w.to_string()));
    for (i, fp) in points.iter().enumerate() {
        report.value(&format!("point.{i}"), describe_point(fp, p));
    }
    report.timing("total", start.elapsed());
    Ok(report)
}

/// `P_p(ρ)` exactly and the point `û_p` with `j(û_p) = -P_p(ρ)`.
pub fn cmd_uhat(p: u32, precision: Precision, alpha_file: Option<&Path>) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let sp = SupersingularPrime::new(p).map_err(|e| usage(e.to_string()))?;
    let pz = p as usize;
    let mut report = RunReport::new("uhat");
    report.param("p", p);
    report.param("precision", format!("{:e}", precision.tolerance));
    report.param("max_iter", precision.max_iter);
    let table = match (alpha_file, sp.genus_zero()) {
        (Some(path), _) => load_alpha_table(path, Some(p))?,
        (None, Some(g)) => g_series(g, VANISHING_SUM_ORDER_PER_P * pz),
        (None, None) => return Err(usage(format!("X_0({p}) has positive genus: supply --alpha-file"))),
    };
    let n = (table.order() / pz).min(20);
    if n == 0 {
        return Err(usage(format!("table must reach index {p}")));
    }
    let shift = match shift_constant_against(&table, &j_series(n), n) {
        Ok(s) => s,
        Err(ModformsError::IdentityViolated { n, .. }) => {
            report.check("constant_difference", fail_at(n));
            report.timing("total", start.elapsed());
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.value("shift_constant", &shift.value);
    let result = find_uhat(&shift, precision)?;
    let u = result.point.u;
    report.check_bool("j_residual", result.residual < precision.tolerance, || format!("{:.3e}", result.residual));
    report.check_bool("in_fundamental_domain", in_fundamental_domain(&u), || u.to_string());
    report.value("uhat_re", format!("{:.12}", u.re()));
    report.value("uhat_im", format!("{:.12}", u.im()));
    report.value("j_target", format!("{:.6}", -shift.value.to_f64().unwrap_or(f64::NAN)));
    report.value("j_residual", format!("{:.3e}", result.residual));
    report.value("candidates", result.candidates.len());
    if table.order() >= VANISHING_SUM_ORDER_PER_P * pz {
        let residual = verify_vanishing_sum(&table, &u)?;
        report.check_bool("vanishing_sum", residual < 1e-6, || format!("{residual:.3e}"));
        report.value("vanishing_sum_residual", format!("{residual:.3e}"));
    } else {
        report.value("vanishing_sum", format!("skipped: table order below {}", VANISHING_SUM_ORDER_PER_P * pz));
    }
    report.timing("total", start.elapsed());
    Ok(report)
}

fn join(xs: impl IntoIterator<Item = u64>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Digit operators at `n`: `F_p^k`, `σ_p^l`, their commutator and the
/// neighbourhood `σ^a F^b (n)` for `a < p`, `b ≤ k`.
pub fn cmd_digits(p: u64, n: u64, k: u32, l: u64) -> Result<RunReport, CliError> {
    if !is_prime(p) {
        return Err(usage(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    if l == 0 || l >= p {
        return Err(usage(format!("l must satisfy 0 < l < p (got l={l}, p={p})")));
    }
    if p.checked_pow(k).and_then(|pk| n.checked_add(p).and_then(|m| m.checked_mul(pk))).is_none() {
        return Err(usage("n p^k exceeds 64 bits"));
    }
    let mut report = RunReport::new("digits");
    report.param("p", p);
    report.param("n", n);
    report.param("k", k);
    report.param("l", l);

    let direct = commutator_h(n, p, k, l);
    let closed = commutator_h_closed(n, p, k, l);
    let in_ideal = n % p == 0;
    report.check_bool("closed_form", direct == closed, || format!("direct {direct} closed {closed}"));
    report.check_bool("image_outside_ideal", direct.rem_euclid(p as i64) != 0, || direct.to_string());
    if in_ideal {
        let want = l as i64 * ((p as i64).pow(k) - 1);
        report.check_bool("ideal_branch", direct == want, || format!("expected {want}"));
    }
    report.check_bool("sigma_period", sigma_shift(n, p, p) == n, String::new);
    report.check_bool("word_reconstruction", apply_word(&word_of(n, p), p) == n, String::new);

    report.value("digits", format!("({})", join(digits_of(n, p).digits().iter().copied())));
    report.value("f_shift", f_shift(n, p, k));
    report.value("sigma_shift", sigma_shift(n, p, l));
    report.value("h_direct", direct);
    report.value("h_closed", closed);
    report.value("in_ideal", in_ideal);
    if n == 0 {
        report.value("f_sequence", "none: index 0 is fixed by F_p");
    } else {
        let root = chain_root(n, p);
        report.value("chain_root", root);
        report.value("f_sequence", join(f_chain(n, p, k as usize + 1)));
    }
    for b in 0..=k {
        let base = f_shift(n, p, b);
        report.value(&format!("step.{b}"), join((0..p).map(|a| sigma_shift(base, p, a))));
    }
    Ok(report)
}

/// Writes a table file for `table`; used by fixtures and round-trip tests.
pub fn table_text(table: &AlphaTable) -> String {
    emit_table(&CoefficientTable { p: table.p().get(), entries: table.entries().to_vec() })
}
