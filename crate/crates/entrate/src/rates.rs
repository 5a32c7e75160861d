//! Exchange-rate machinery: f(m), lower bounds on the deterministic rate,
//! closed forms for maximally entangled targets, catalyst checks and a
//! bounded catalyst search, and the maximal conversion probability.
//!
//! The central quantity is f(m), the largest n such that m source copies
//! transform deterministically into n target copies. Its ratio to m is a
//! lower bound on the deterministic exchange rate; the entropy-ratio bound
//! from the entropy module is the matching upper bound, and the two are
//! bundled into a [`RateReport`] whose sandwich invariants are enforced at
//! construction.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::entropy::{asymptotic_rate, entropy_ratio, renyi, RenyiOrder};
use crate::majorization::majorizes;
use crate::rational::{
    ln_rational, log2_rational, ratio_from_biguint, ratio_one, rational_to_f64, serde_opt_real,
    serde_real, serde_str, Rational,
};
use crate::spectrum::{GroupedSpectrum, SchmidtSpectrum};
use crate::{Error, Result};

/// The m that maximized f(m)/m, with the f(m) attained there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerWitness {
    pub m: u32,
    pub f_m: u32,
}

/// Search budget a report was computed under. `n_cap: None` means the
/// per-m default ceiling from [`default_n_cap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub m_max: u32,
    pub n_cap: Option<u32>,
}

/// Bundle of every bound this crate computes for one source/target pair.
///
/// Invariants checked at construction (a violation is a defect in this
/// crate, never a property of the input):
/// - `lower_bound <= upper_bound + 1e-9`;
/// - when `closed_form` is present it lies in
///   `[lower_bound - 1/m_max, upper_bound + 1e-9]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    #[serde(with = "serde_str")]
    pub lower_bound: Rational,
    /// Absent exactly when the budget was too small to find any feasible
    /// power; `threshold_m` then carries the m that is guaranteed to work.
    pub lower_witness: Option<LowerWitness>,
    pub threshold_m: Option<u64>,
    #[serde(with = "serde_real")]
    pub upper_bound: f64,
    pub upper_order: RenyiOrder,
    #[serde(with = "serde_opt_real", default)]
    pub closed_form: Option<f64>,
    #[serde(with = "serde_real")]
    pub asymptotic: f64,
    pub budget: SearchBudget,
}

impl RateReport {
    fn check_invariants(&self) {
        let lower = rational_to_f64(&self.lower_bound);
        assert!(
            lower <= self.upper_bound + 1e-9,
            "rate sandwich violated: lower {} exceeds upper {}",
            lower,
            self.upper_bound
        );
        if let Some(cf) = self.closed_form {
            assert!(
                cf >= lower - 1.0 / self.budget.m_max as f64 && cf <= self.upper_bound + 1e-9,
                "closed form {} outside [{} - 1/{}, {} + 1e-9]",
                cf,
                lower,
                self.budget.m_max,
                self.upper_bound
            );
        }
    }
}

/// Outcome of a catalyst feasibility check and bounded search.
///
/// `plain_feasible` implies `catalyst_feasible` (the trivial catalyst).
/// When no catalyst was found, that means "none in the searched grid",
/// never "no catalyst exists"; `search_space` records what was scanned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalystReport {
    pub plain_feasible: bool,
    pub catalyst_feasible: bool,
    pub catalyst: Option<CatalystChoice>,
    pub search_space: Option<String>,
}

/// A concrete catalyst: a spectrum used in some number of copies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalystChoice {
    pub spectrum: SchmidtSpectrum,
    pub copies: u32,
}

/// Default search ceiling for the target copy count at a given m: the
/// entropy of every order is monotone under deterministic transformations,
/// so f(m)/m never exceeds the source/target entropy ratio at any single
/// order. The cheapest three orders (0, 2, infinity) are evaluated and the
/// +1 absorbs float rounding of the minimum.
pub fn default_n_cap(source: &GroupedSpectrum, target: &GroupedSpectrum, m: u32) -> u32 {
    assert!(
        target.is_entangled(),
        "the default copy ceiling needs an entangled target"
    );
    let r = [RenyiOrder::Zero, RenyiOrder::Finite(2.0), RenyiOrder::Infinity]
        .into_iter()
        .map(|o| renyi(source, o) / renyi(target, o))
        .fold(f64::INFINITY, f64::min);
    let cap = (m as f64 * r).floor();
    if cap >= u32::MAX as f64 {
        u32::MAX
    } else {
        (cap.max(0.0) as u32).saturating_add(1)
    }
}

/// Largest n <= n_cap with majorizes(source^m, target^n); 0 when even a
/// single target copy is out of reach.
pub fn f_of_m(source: &GroupedSpectrum, target: &GroupedSpectrum, m: u32, n_cap: u32) -> u32 {
    assert!(m >= 1, "m must be at least 1");
    assert!(n_cap >= 1, "the copy ceiling must be at least 1");
    let sm = source.power(m).expect("m >= 1");
    let tpows = powers_up_to(target, n_cap);
    f_scan(&sm, &tpows)
}

/// Scan n downward from the cap and return the first success. This tests
/// every n above the answer directly, so it is correct without assuming
/// that feasibility is monotone in n.
fn f_scan(sm: &GroupedSpectrum, tpows: &[GroupedSpectrum]) -> u32 {
    for n in (0..tpows.len()).rev() {
        if majorizes(sm, &tpows[n]).holds {
            return (n + 1) as u32;
        }
    }
    0
}

fn powers_up_to(g: &GroupedSpectrum, k: u32) -> Vec<GroupedSpectrum> {
    assert!(k >= 1);
    let mut out = Vec::with_capacity(k as usize);
    out.push(g.clone());
    for _ in 1..k {
        let next = out.last().unwrap().tensor(g);
        out.push(next);
    }
    out
}

/// Best f(m)/m over m in 1..=m_max, with the smallest maximizing m.
pub fn rate_lower_bound(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    m_max: u32,
) -> Result<(Rational, u32)> {
    rate_lower_bound_capped(source, target, m_max, None)
}

/// [`rate_lower_bound`] with an explicit per-m copy ceiling instead of the
/// default one.
pub fn rate_lower_bound_capped(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    m_max: u32,
    n_cap: Option<u32>,
) -> Result<(Rational, u32)> {
    lower_bound_impl(source, target, m_max, n_cap, cfg!(feature = "parallel"))
        .map(|(r, m, _)| (r, m))
}

/// Always-sequential [`rate_lower_bound`]; same result, used to benchmark
/// the parallel per-m sweep against a single-threaded one.
pub fn rate_lower_bound_seq(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    m_max: u32,
) -> Result<(Rational, u32)> {
    lower_bound_impl(source, target, m_max, None, false).map(|(r, m, _)| (r, m))
}

fn lower_bound_impl(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    m_max: u32,
    n_cap: Option<u32>,
    parallel: bool,
) -> Result<(Rational, u32, u32)> {
    if !source.is_entangled() || !target.is_entangled() {
        return Err(Error::ProductState);
    }
    assert!(m_max >= 1, "m_max must be at least 1");
    let caps: Vec<u32> = (1..=m_max)
        .map(|m| n_cap.unwrap_or_else(|| default_n_cap(source, target, m)).max(1))
        .collect();
    let max_cap = *caps.iter().max().unwrap();
    let spows = powers_up_to(source, m_max);
    let tpows = powers_up_to(target, max_cap);
    let fs = scan_all(&spows, &tpows, &caps, parallel);

    let mut best: Option<(Rational, u32, u32)> = None;
    for (i, &f) in fs.iter().enumerate() {
        if f == 0 {
            continue;
        }
        let m = (i + 1) as u32;
        let ratio = Rational::new(BigInt::from(f), BigInt::from(m));
        // Strictly-greater replacement keeps the smallest maximizing m.
        match &best {
            Some((br, _, _)) if ratio <= *br => {}
            _ => best = Some((ratio, m, f)),
        }
    }
    best.ok_or_else(|| Error::BudgetTooSmall {
        m_max,
        threshold: feasibility_threshold(source, target)
            .expect("entangled source checked above"),
    })
}

/// f(m) for every m, joined back in m order regardless of scheduling.
fn scan_all(
    spows: &[GroupedSpectrum],
    tpows: &[GroupedSpectrum],
    caps: &[u32],
    parallel: bool,
) -> Vec<u32> {
    let scan = |i: usize| f_scan(&spows[i], &tpows[..caps[i] as usize]);
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..spows.len()).into_par_iter().map(scan).collect();
    }
    let _ = parallel;
    (0..spows.len()).map(scan).collect()
}

/// Smallest m guaranteed to reach one target copy: once the largest source
/// coefficient to the m-th power is at most 1 over the target dimension,
/// every prefix sum of the powered source sits below the flat spectrum that
/// the target majorizes.
pub fn feasibility_threshold(source: &GroupedSpectrum, target: &GroupedSpectrum) -> Result<u64> {
    if !source.is_entangled() {
        return Err(Error::ProductState);
    }
    let d = target.total_dimension();
    if d.is_one() {
        return Ok(1);
    }
    let a1 = source.largest_value();
    let dr = ratio_from_biguint(&d);
    let ok = |m: u64| {
        let e = i32::try_from(m).expect("threshold fits i32");
        a1.pow(e) * &dr <= ratio_one()
    };
    // Float estimate, then exact adjustment by a step or two.
    let est = (ln_rational(&dr) / -ln_rational(a1)).ceil();
    let mut m = if est.is_finite() && est >= 1.0 { est as u64 } else { 1 };
    while !ok(m) {
        m += 1;
    }
    while m > 1 && ok(m - 1) {
        m -= 1;
    }
    Ok(m)
}

/// The exact deterministic rate toward a maximally entangled target of k
/// levels: -log_k of the largest source coefficient.
pub fn closed_form_uniform_target(source: &GroupedSpectrum, k: u64) -> Result<f64> {
    if !source.is_entangled() {
        return Err(Error::ProductState);
    }
    assert!(k >= 2, "a maximally entangled target needs k >= 2");
    Ok(-log2_rational(source.largest_value()) / (k as f64).log2())
}

/// Exact per-m value under a maximally entangled k-level target: the
/// largest f with k^f * alpha_1^m <= 1, settled by exact integer
/// comparisons so boundary cases (alpha_1^m exactly a power of 1/k) come
/// out right where floating logs would not.
pub fn closed_form_f_of_m(source: &GroupedSpectrum, k: u64, m: u32) -> Result<u64> {
    if !source.is_entangled() {
        return Err(Error::ProductState);
    }
    assert!(k >= 2, "a maximally entangled target needs k >= 2");
    assert!(m >= 1, "m must be at least 1");
    let am = source.largest_value().pow(m as i32);
    let p = am.numer().clone();
    let q = am.denom().clone();
    let kb = BigInt::from(k);
    let fits = |f: u64| kb.pow(u32::try_from(f).expect("exponent fits u32")) * &p <= q;
    let est = (-ln_rational(&am) / (k as f64).ln()).floor().max(0.0);
    let mut f = est as u64;
    // f = 0 always fits because alpha_1^m <= 1.
    while f > 0 && !fits(f) {
        f -= 1;
    }
    while fits(f + 1) {
        f += 1;
    }
    Ok(f)
}

/// Whether `catalyst^copies` makes the transformation go through: the
/// catalyzed majorization test with the same state attached to both sides.
/// Source and target here are the full (already powered) spectra of
/// interest.
pub fn catalyst_verify(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    catalyst: &GroupedSpectrum,
    copies: u32,
) -> bool {
    assert!(copies >= 1, "copies must be at least 1");
    let cat = catalyst.power(copies).expect("copies >= 1");
    majorizes(&source.tensor(&cat), &target.tensor(&cat)).holds
}

/// Scan two-level catalysts (q, 1-q) with q on a uniform grid strictly
/// inside (1/2, 1) and copy counts 1..=copies_max, returning the first
/// success in lexicographic (copies, q) order. The search is a bounded
/// heuristic: an empty result means no catalyst in this grid, not that no
/// catalyst exists.
pub fn catalyst_search_2level(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    q_grid: u32,
    copies_max: u32,
) -> CatalystReport {
    search_impl(source, target, q_grid, copies_max, cfg!(feature = "parallel"))
}

/// Always-sequential [`catalyst_search_2level`]; same result, used to
/// benchmark the parallel grid sweep against a single-threaded one.
pub fn catalyst_search_2level_seq(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    q_grid: u32,
    copies_max: u32,
) -> CatalystReport {
    search_impl(source, target, q_grid, copies_max, false)
}

fn search_impl(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    q_grid: u32,
    copies_max: u32,
    parallel: bool,
) -> CatalystReport {
    if majorizes(source, target).holds {
        return CatalystReport {
            plain_feasible: true,
            catalyst_feasible: true,
            catalyst: None,
            search_space: None,
        };
    }
    // Zero budgets simply make the scan empty, leaving the plain verdict.
    let candidates = u64::from(q_grid.saturating_sub(1)) * u64::from(copies_max);
    let search_space = Some(if candidates == 0 {
        format!("empty grid (q_grid {q_grid}, copies_max {copies_max})")
    } else {
        format!(
            "two-level catalysts (q, 1-q), q = ({g}+j)/{double} for j in 1..={last}, copies 1..={copies_max}",
            g = q_grid,
            double = 2 * u64::from(q_grid),
            last = q_grid - 1,
        )
    });
    for copies in 1..=copies_max {
        if let Some(j) = find_q(source, target, q_grid, copies, parallel) {
            let q = grid_q(q_grid, j);
            let spectrum =
                SchmidtSpectrum::new(vec![q.clone(), ratio_one() - q]).expect("valid two-level");
            return CatalystReport {
                plain_feasible: false,
                catalyst_feasible: true,
                catalyst: Some(CatalystChoice { spectrum, copies }),
                search_space,
            };
        }
    }
    CatalystReport {
        plain_feasible: false,
        catalyst_feasible: false,
        catalyst: None,
        search_space,
    }
}

fn grid_q(grid: u32, j: u32) -> Rational {
    Rational::new(
        BigInt::from(grid as u64 + j as u64),
        BigInt::from(2 * grid as u64),
    )
}

/// Smallest working j for this copy count; find_first keeps the answer the
/// leftmost match whether or not the scan ran in parallel.
fn find_q(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    grid: u32,
    copies: u32,
    parallel: bool,
) -> Option<u32> {
    let test = |j: u32| {
        let cat = GroupedSpectrum::new(vec![
            (grid_q(grid, j), BigUint::one()),
            (ratio_one() - grid_q(grid, j), BigUint::one()),
        ])
        .expect("valid two-level");
        catalyst_verify(source, target, &cat, copies)
    };
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (1..grid).into_par_iter().find_first(|&j| test(j));
    }
    let _ = parallel;
    (1..grid).find(|&j| test(j))
}

/// Cumulative count/mass tables over the grouped descending order, for
/// exact prefix and tail masses at arbitrary expanded positions.
struct TailTable {
    counts: Vec<BigUint>,
    masses: Vec<Rational>,
    values: Vec<Rational>,
    dim: BigUint,
}

impl TailTable {
    fn new(g: &GroupedSpectrum) -> Self {
        let mut counts = Vec::with_capacity(g.distinct_values());
        let mut masses = Vec::with_capacity(g.distinct_values());
        let mut values = Vec::with_capacity(g.distinct_values());
        let mut count = BigUint::zero();
        let mut mass = Rational::zero();
        for (v, m) in g.groups() {
            count += m;
            mass += v * ratio_from_biguint(m);
            counts.push(count.clone());
            masses.push(mass.clone());
            values.push(v.clone());
        }
        Self {
            counts,
            masses,
            values,
            dim: g.total_dimension(),
        }
    }

    /// Mass of the t largest expanded entries.
    fn prefix(&self, t: &BigUint) -> Rational {
        if *t >= self.dim {
            return ratio_one();
        }
        if t.is_zero() {
            return Rational::zero();
        }
        let k = self.counts.partition_point(|c| c < t);
        let (pc, pm) = if k == 0 {
            (BigUint::zero(), Rational::zero())
        } else {
            (self.counts[k - 1].clone(), self.masses[k - 1].clone())
        };
        pm + &self.values[k] * ratio_from_biguint(&(t - pc))
    }

    fn tail(&self, t: &BigUint) -> Rational {
        ratio_one() - self.prefix(t)
    }
}

/// The maximal probability of converting the source into the target by
/// LOCC: the minimum over cut points t of the ratio of tail masses beyond
/// the t largest entries. Exact rational; 1 exactly when the deterministic
/// transformation exists, 0 when the target has larger support than the
/// source (LOCC cannot create Schmidt rank).
pub fn max_conversion_probability(source: &GroupedSpectrum, target: &GroupedSpectrum) -> Rational {
    let da = source.total_dimension();
    let db = target.total_dimension();
    if db.is_one() {
        return ratio_one();
    }
    if da < db {
        return Rational::zero();
    }
    // Both tail masses are piecewise linear in t and the ratio of linear
    // functions is monotone between breakpoints, so the minimum over all
    // integer t in [0, dim(target) - 1] is attained where some group of
    // either spectrum ends (clipped to the valid range), or at the ends of
    // the range itself.
    let mut cands: Vec<BigUint> = vec![BigUint::zero(), &db - 1u32];
    for g in [source, target] {
        let mut c = BigUint::zero();
        for (_, m) in g.groups() {
            c += m;
            if c < db {
                cands.push(c.clone());
            }
        }
    }
    cands.sort();
    cands.dedup();

    let ta = TailTable::new(source);
    let tb = TailTable::new(target);
    let mut best: Option<Rational> = None;
    for t in &cands {
        // The target tail is positive because t <= dim(target) - 1.
        let r = ta.tail(t) / tb.tail(t);
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    best.expect("candidate set is never empty")
}

/// Everything at once: lower bound with witness, entropy-ratio upper bound,
/// closed form when the target is maximally entangled, and the asymptotic
/// rate. A too-small budget is reported in-band as a zero lower bound with
/// the guaranteed-feasible threshold attached.
pub fn rate_report(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    m_max: u32,
) -> Result<RateReport> {
    rate_report_capped(source, target, m_max, None)
}

/// [`rate_report`] with an explicit per-m copy ceiling instead of the
/// default one.
pub fn rate_report_capped(
    source: &GroupedSpectrum,
    target: &GroupedSpectrum,
    m_max: u32,
    n_cap: Option<u32>,
) -> Result<RateReport> {
    if !source.is_entangled() || !target.is_entangled() {
        return Err(Error::ProductState);
    }
    let er = entropy_ratio(source, target)?;
    let asymptotic = asymptotic_rate(source, target)?;
    let closed_form = match uniform_levels(target) {
        Some(k) => Some(closed_form_uniform_target(source, k)?),
        None => None,
    };
    let (lower_bound, lower_witness, threshold_m) =
        match lower_bound_impl(source, target, m_max, n_cap, cfg!(feature = "parallel")) {
            Ok((r, m, f)) => (r, Some(LowerWitness { m, f_m: f }), None),
            Err(Error::BudgetTooSmall { threshold, .. }) => {
                (Rational::zero(), None, Some(threshold))
            }
            Err(e) => return Err(e),
        };
    let report = RateReport {
        lower_bound,
        lower_witness,
        threshold_m,
        upper_bound: er.ratio,
        upper_order: er.minimizing_order,
        closed_form,
        asymptotic,
        budget: SearchBudget { m_max, n_cap },
    };
    report.check_invariants();
    Ok(report)
}

/// Some(k) when the target is the maximally entangled state of k levels.
fn uniform_levels(g: &GroupedSpectrum) -> Option<u64> {
    if g.distinct_values() != 1 {
        return None;
    }
    let (_, m) = &g.groups()[0];
    m.to_u64().filter(|&k| k >= 2)
}
