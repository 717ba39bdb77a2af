//! Exact verification sweeps over the reference corpus. Each returns a
//! report listing every failing case; an empty list means the check passed.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{Letter, Monomial};
use crate::corpus::{alphabet, bounded_moments, potentials, words};
use crate::cumulants::{cumulants_from_moments, cumulants_via_moebius};
use crate::error::Result;
use crate::exec::Execution;
use crate::hciz::{hciz_series, one_over_n_property};
use crate::maps::{enumerate_maps, total_weight, RootPolicy};
use crate::multi_index::MultiIndex;
use crate::nc::noncrossing_partitions;
use crate::potential::Potential;
use crate::solver::{BoundConstants, SeriesTable};
use crate::tau::{moments_free, MomentTable, TauState};

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn families(v: &Potential) -> u16 {
    v.unitary_families().max(1)
}

/// `mu_t ⊗ mu_t(∂_i P) + mu_t(D_i V_t P)` vanishes through `order` for every
/// corpus potential and every word of length `<= max_len`, formal tau.
pub fn sd_residual_suite(order: usize, max_len: usize, exec: Execution) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("sd-residual");
    for (name, v) in potentials() {
        let n = families(&v);
        let table = SeriesTable::new(v, TauState::formal());
        let cases: Vec<(u16, Monomial)> = words(&alphabet(n, 2), max_len)
            .into_iter()
            .flat_map(|p| (1..=n).map(move |i| (i, p.clone())))
            .collect();
        let results = exec.map(&cases, |(i, p)| table.sd_residual(*i, p, order));
        for ((i, p), r) in cases.iter().zip(results) {
            for (k, w) in r? {
                report.record(w.is_zero(), || format!("{name}: i={i} P=`{p}` k={k}: {w}"));
            }
        }
    }
    Ok(report)
}

/// Words `Π U_i* A_i^{p} U_i` with `Σ p <= max_degree`, adjacent blocks in
/// different families, paired with the deterministic word `Π A_i^p`.
pub fn conjugated_words(families: u16, max_degree: usize) -> Vec<(Monomial, Monomial)> {
    fn grow(families: u16, left: usize, last: u16, blocks: &mut Vec<(u16, usize)>, out: &mut Vec<Vec<(u16, usize)>>) {
        if !blocks.is_empty() {
            out.push(blocks.clone());
        }
        for i in 1..=families {
            if i == last {
                continue;
            }
            for p in 1..=left {
                blocks.push((i, p));
                grow(families, left - p, i, blocks, out);
                blocks.pop();
            }
        }
    }
    let mut all = Vec::new();
    grow(families, max_degree, 0, &mut Vec::new(), &mut all);
    all.into_iter()
        .map(|blocks| {
            let mut word = Vec::new();
            let mut det = Vec::new();
            for (i, p) in blocks {
                word.push(Letter::u_star(i));
                word.extend(std::iter::repeat_n(Letter::det(i), p));
                word.push(Letter::u(i));
                det.extend(std::iter::repeat_n(Letter::det(i), p));
            }
            (Monomial::from_letters(word), Monomial::from_letters(det))
        })
        .collect()
}

/// At `V = 0` the solver's moments of conjugated words equal the free
/// product of the marginals. The solver runs with formal tau and is then
/// evaluated on the marginals alone, so it never sees `moments_free`.
pub fn freeness_suite(marginals: &MomentTable, max_degree: usize, exec: Execution) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("freeness");
    let table = SeriesTable::new(Potential::zero(), TauState::formal());
    let marginal_state = TauState::joint(marginals.clone());
    let cases = conjugated_words(2, max_degree);
    let k = MultiIndex::zero(0);
    let results = exec.map(&cases, |(w, det)| -> Result<_> {
        let solver = marginal_state.evaluate(&table.mu(&k, w)?)?;
        Ok((solver, moments_free(marginals, det)?))
    });
    for ((w, _), r) in cases.iter().zip(results) {
        let (solver, oracle) = r?;
        let ok = solver.as_constant().is_some_and(|c| c == oracle);
        report.record(ok, || format!("`{w}`: solver {solver}, free product {oracle}"));
    }
    Ok(report)
}

/// Roots used by the map checks: short words plus every potential word.
fn map_roots(v: &Potential, max_len: usize) -> Vec<Monomial> {
    let mut roots: BTreeSet<Monomial> = words(&alphabet(families(v), 2), max_len).into_iter().collect();
    for j in 0..v.arity() {
        roots.extend(v.monomials(j).iter().cloned());
    }
    roots.into_iter().collect()
}

/// Map totals against the solver, for both root policies.
pub fn map_suite(order: usize, max_len: usize, exec: Execution) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("maps");
    for (name, v) in potentials() {
        let tau = TauState::formal();
        let table = SeriesTable::new(v.clone(), tau.clone());
        let cases: Vec<(MultiIndex, Monomial)> = MultiIndex::up_to(v.arity(), order)
            .into_iter()
            .flat_map(|k| map_roots(&v, max_len).into_iter().map(move |p| (k.clone(), p)))
            .collect();
        let results = exec.map(&cases, |(k, p)| -> Result<_> {
            let mu = table.mu(k, p)?;
            let last = total_weight(&enumerate_maps(&v, &tau, k, p, RootPolicy::LastU)?);
            let first = total_weight(&enumerate_maps(&v, &tau, k, p, RootPolicy::FirstU)?);
            Ok((mu, last, first))
        });
        for ((k, p), r) in cases.iter().zip(results) {
            let (mu, last, first) = r?;
            report.record(mu == last, || format!("{name}: k={k} P=`{p}`: maps {last}, solver {mu}"));
            report.record(first == last, || {
                format!("{name}: k={k} P=`{p}`: first-U total {first}, last-U total {last}")
            });
        }
    }
    Ok(report)
}

/// `mu^k(PQ) = mu^k(QP)`, where the right side is summed over maps rooted
/// by the other policy so the comparison does not go through the memo.
pub fn traciality_suite(order: usize, max_len: usize, exec: Execution) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("traciality");
    for (name, v) in potentials() {
        let tau = TauState::formal();
        let table = SeriesTable::new(v.clone(), tau.clone());
        let ws = words(&alphabet(families(&v), 2), max_len);
        let mut cases = Vec::new();
        for p in &ws {
            for q in &ws {
                if p.is_empty() || q.is_empty() || p.concat(q).u_degree() == 0 {
                    continue;
                }
                for k in MultiIndex::up_to(v.arity(), order) {
                    cases.push((k, p.clone(), q.clone()));
                }
            }
        }
        let results = exec.map(&cases, |(k, p, q)| -> Result<_> {
            let pq = table.mu(k, &p.concat(q))?;
            let qp = total_weight(&enumerate_maps(&v, &tau, k, &q.concat(p), RootPolicy::FirstU)?);
            Ok((pq, qp))
        });
        for ((k, p, q), r) in cases.iter().zip(results) {
            let (pq, qp) = r?;
            report.record(pq == qp, || format!("{name}: k={k} P=`{p}` Q=`{q}`: {pq} vs {qp}"));
        }
    }
    Ok(report)
}

/// Deterministic words up to `max_len` in two letters, one per cyclic class.
pub fn det_classes(max_len: usize) -> Vec<Monomial> {
    let mut seen = BTreeSet::new();
    words(&alphabet(0, 2), max_len)
        .into_iter()
        .filter(|w| !w.is_empty() && seen.insert(w.cyclic_class()))
        .collect()
}

/// Joint table on two letters with the given value per cyclic class.
pub fn joint_table(max_len: usize, mut value: impl FnMut(&Monomial) -> num_rational::BigRational) -> MomentTable {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut table = MomentTable::new();
    for w in det_classes(max_len) {
        let x = value(&w);
        let first = w.letters()[0].index;
        if w.letters().iter().all(|l| l.index == first) {
            if first == 1 { &mut a } else { &mut b }.push((w.len(), x));
        } else {
            table = table.with_joint(&w, x);
        }
    }
    a.sort();
    b.sort();
    table
        .with_marginal(1, a.into_iter().map(|(_, x)| x).collect())
        .with_marginal(2, b.into_iter().map(|(_, x)| x).collect())
}

/// Moebius and recursive cumulants agree on every word up to `max_len`.
pub fn moebius_suite(tau: &TauState, max_len: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("moebius");
    for w in words(&alphabet(0, 2), max_len).into_iter().filter(|w| !w.is_empty()) {
        let a = cumulants_via_moebius(tau, &w)?;
        let b = cumulants_from_moments(tau, &w)?;
        report.record(a == b, || format!("`{w}`: moebius {a}, recursion {b}"));
    }
    Ok(report)
}

/// `|π| + |K(π)| = n + 1` on all of NC(n), `1 <= n <= max_n`.
pub fn kreweras_suite(max_n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("kreweras");
    for n in 1..=max_n {
        for pi in noncrossing_partitions(n) {
            let c = pi.kreweras()?;
            report.record(pi.block_count() + c.block_count() == n + 1 && !c.is_crossing(), || {
                format!("n={n}: {pi} -> {c}")
            });
        }
    }
    Ok(report)
}

/// Free mixed cumulants of length `<= max_len` vanish.
pub fn free_cumulant_suite(marginals: &MomentTable, max_len: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("free-cumulants");
    let tau = TauState::free(marginals.clone());
    for w in words(&alphabet(0, 2), max_len) {
        let l = w.letters();
        if l.is_empty() || l.iter().all(|x| x.index == l[0].index) {
            continue;
        }
        let k = cumulants_from_moments(&tau, &w)?;
        report.record(k.is_zero(), || format!("`{w}`: {k}"));
    }
    Ok(report)
}

/// Growth bound on every corpus coefficient with `|k| <= order` and words of
/// length `<= max_len`, under moments bounded by one.
pub fn bound_suite(order: usize, max_len: usize, exec: Execution) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bounds");
    for (name, v) in potentials() {
        let constants = BoundConstants::from_potential(&v);
        let table = SeriesTable::new(v.clone(), TauState::free(bounded_moments(order * 4 + max_len)));
        let cases: Vec<(MultiIndex, Monomial)> = MultiIndex::up_to(v.arity(), order)
            .into_iter()
            .flat_map(|k| map_roots(&v, max_len).into_iter().map(move |p| (k.clone(), p)))
            .collect();
        let results = exec.map(&cases, |(k, p)| table.bound_check(&constants, k, p));
        for ((k, p), r) in cases.iter().zip(results) {
            report.record(r?, || format!("{name}: k={k} P=`{p}`"));
        }
    }
    Ok(report)
}

/// `n · F_n` has integer coefficients, `1 <= n <= max_order`.
pub fn hciz_integrality_suite(max_order: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("hciz-integrality");
    let series = hciz_series(max_order, true)?;
    for n in 1..=max_order {
        report.record(one_over_n_property(&series, n), || {
            let bad: Vec<String> = series
                .named_terms(n)
                .into_iter()
                .filter(|(_, c)| !(c * BigInt::from(n)).is_integer())
                .map(|(m, c)| format!("{c}·{m}"))
                .collect();
            format!("F_{n}: {}", bad.join(", "))
        });
    }
    Ok(report)
}

/// Names accepted by [`run_suite`].
pub const SUITES: &[&str] = &[
    "sd-residual",
    "freeness",
    "maps",
    "traciality",
    "moebius",
    "kreweras",
    "free-cumulants",
    "bounds",
    "hciz-integrality",
];

/// Runs a named suite at the given order. Suites without an order ignore it.
pub fn run_suite(name: &str, order: usize, exec: Execution) -> Result<SuiteReport> {
    let marginals = bounded_moments(8);
    match name {
        "sd-residual" => sd_residual_suite(order, 3, exec),
        "freeness" => freeness_suite(&marginals, 8, exec),
        "maps" => map_suite(order, 2, exec),
        "traciality" => traciality_suite(order, 2, exec),
        "moebius" => {
            let mut counter = 0i64;
            let table = joint_table(6, |w| {
                counter += 1;
                crate::tau::ratio((counter * 7 + w.len() as i64) % 11 - 5, counter % 4 + 1)
            });
            moebius_suite(&TauState::joint(table), 6)
        }
        "kreweras" => kreweras_suite(7),
        "free-cumulants" => free_cumulant_suite(&bounded_moments(6), 6),
        "bounds" => bound_suite(order, 2, exec),
        "hciz-integrality" => hciz_integrality_suite(order.max(1)),
        other => Err(crate::Error::Config(format!(
            "unknown suite `{other}`; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

