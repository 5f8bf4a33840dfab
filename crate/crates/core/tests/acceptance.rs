//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fail.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use circular_ptc::analysis::{scan_divergence, IntervalKind, ScanConfig};
use circular_ptc::iteration::{even_deductions_nondecreasing, DEFAULT_MAX_ITER};
use circular_ptc::report::SolveReport;
use circular_ptc::{
    applicable_figure, brute_force_max_feasible, optimal_deduction, ptc_base, ptc_of_deduction, reconcile,
    repayment_limitation, run_default_iteration, ExactRatio, FigureTable, FilingStatus, IterationPoint,
    IterationStatus, Money, PtcContext, RepaymentLimit, RoundingMode, Scenario, SolveMethod, TaxYearParams,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn dollars(d: i64) -> Money {
    Money::from_dollars(d)
}

fn brooklyn(income: Money) -> Scenario {
    Scenario::simple(dollars(16_240), dollars(10_390), dollars(10_390), income, "2018")
}

fn ctx(s: Scenario, mode: RoundingMode) -> PtcContext {
    PtcContext::with_bundled_params(s, mode).expect("valid scenario")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Mean wall time of `f` over `runs` calls, after one warm-up call.
fn mean_time<T>(runs: u32, mut f: impl FnMut() -> T) -> Duration {
    std::hint::black_box(f());
    let start = Instant::now();
    for _ in 0..runs {
        std::hint::black_box(f());
    }
    start.elapsed() / runs
}

fn uniform_cents(rng: &mut ChaCha8Rng, lo_dollars: i64, hi_dollars: i64) -> Money {
    Money::from_cents(rng.gen_range(lo_dollars * 100..=hi_dollars * 100))
}

/// F in [$12k, $50k], Q = P in [$3k, $30k], I in [F, 6F] redrawn until I >= Q,
/// APTC zero half the time and uniform on [0, Q] otherwise.
fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    let f = uniform_cents(rng, 12_000, 50_000);
    let q = uniform_cents(rng, 3_000, 30_000);
    let income = loop {
        let i = Money::from_cents(rng.gen_range(f.cents()..=6 * f.cents()));
        if i >= q {
            break i;
        }
    };
    let year = if rng.gen_bool(0.5) { "2018" } else { "2019" };
    let mut s = Scenario::simple(f, q, q, income, year);
    if rng.gen_bool(0.5) {
        s.advance_credit = Money::from_cents(rng.gen_range(0..=q.cents()));
    }
    s
}

fn criterion_6_scenarios() -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..1_000).map(|_| random_scenario(&mut rng)).collect()
}

fn brooklyn_scan_incomes() -> impl Iterator<Item = Money> {
    (60_000..=75_000).step_by(50).map(dollars)
}

fn c1_brooklyn_trace() -> Outcome {
    let c = ctx(brooklyn(dollars(71_150)), RoundingMode::Dollar);
    let out = run_default_iteration(&c, DEFAULT_MAX_ITER).unwrap();
    let got: Vec<(Money, Money)> = out.trace.iter().map(|p| (p.c, p.d)).collect();
    let want = vec![(dollars(0), dollars(10_390)), (dollars(4_581), dollars(5_809)), (dollars(0), dollars(10_390))];
    ensure(got == want, || format!("trace {got:?}"))?;
    ensure(out.status == IterationStatus::DivergedDoNotUse, || format!("status {:?}", out.status))?;
    let t = mean_time(200, || run_default_iteration(&c, DEFAULT_MAX_ITER).unwrap());
    ensure(t < Duration::from_millis(1), || format!("took {t:?}"))?;
    Ok(format!("($0,$10,390) -> ($4,581,$5,809) -> ($0,$10,390), diverged_do_not_use, {t:?}"))
}

fn c2_brooklyn_bisection() -> Outcome {
    let c = ctx(brooklyn(dollars(71_150)), RoundingMode::Dollar);
    let r = SolveReport::new(&c, false).unwrap();
    ensure(r.d == dollars(6_208) && r.ptc == dollars(4_182), || format!("d {} ptc {}", r.d, r.ptc))?;
    ensure(r.d + r.ptc == dollars(10_390) && r.certificate.g_at_d == r.certificate.q, || "d + ptc != Q".into())?;
    ensure(r.certificate.holds, || "certificate fails".into())?;
    let t = mean_time(200, || SolveReport::new(&c, false).unwrap());
    ensure(t < Duration::from_millis(1), || format!("took {t:?}"))?;
    Ok(format!("d = $6,208, ptc = $4,182, d + ptc = Q, {t:?}"))
}

fn c3_dutchess() -> Outcome {
    let params = TaxYearParams {
        year: "flat".into(),
        figure_table: FigureTable::constant(900).unwrap(),
        repayment_table: TaxYearParams::bundled("2018").unwrap().repayment_table,
    };
    let s = Scenario::simple(dollars(12_000), dollars(6_000), dollars(6_000), dollars(48_000), "flat");
    for mode in [RoundingMode::Cent, RoundingMode::Dollar, RoundingMode::None] {
        let c = PtcContext::new(s.clone(), params.clone(), mode).unwrap();
        let ptc = ptc_base(&c, dollars(48_000));
        ensure(ptc == dollars(1_680), || format!("{mode}: {ptc}"))?;
    }
    Ok("ptc_base = $1,680 in every rounding mode".into())
}

fn c4_figure_tables() -> Outcome {
    let ms = [100, 133, 150, 200, 250, 300, 400];
    let tables = [
        ("2018", ["0.0201", "0.0302", "0.0403", "0.0634", "0.0810", "0.0956", "0.0956"]),
        ("2019", ["0.0208", "0.0311", "0.0415", "0.0654", "0.0836", "0.0986", "0.0986"]),
    ];
    for (year, want) in tables {
        let p = TaxYearParams::bundled(year).unwrap();
        for (m, w) in ms.iter().zip(want) {
            for quantize in [false, true] {
                let f = applicable_figure(ExactRatio::from_hundredths(*m), &p.figure_table, quantize).unwrap();
                let got = f.to_decimal_string(4);
                // exact: no digits beyond the fourth place
                ensure(got == w && (f.numer() * 10_000) % f.denom() == 0, || {
                    format!("{year} m={m}: {got} (exact {f}) != {w}")
                })?;
            }
        }
    }
    Ok("2018 and 2019 knots exact".into())
}

fn c5_repayment_tables() -> Outcome {
    let bands: [(i64, usize); 8] = [(100, 0), (150, 0), (199, 0), (200, 1), (299, 1), (300, 2), (399, 2), (400, 3)];
    for (year, single) in [("2018", [300, 775, 1_300]), ("2019", [300, 800, 1_325])] {
        let p = TaxYearParams::bundled(year).unwrap();
        for (status, factor) in [(FilingStatus::Single, 1), (FilingStatus::Other, 2)] {
            for (m, band) in bands.iter().chain([(450, 3), (1_000, 3)].iter()) {
                let got = repayment_limitation(ExactRatio::from_hundredths(*m), status, &p.repayment_table);
                let want = if *band == 3 {
                    RepaymentLimit::Unlimited
                } else {
                    RepaymentLimit::Limited(dollars(single[*band] * factor))
                };
                ensure(got == want, || format!("{year} {status:?} m={m}: {got:?} != {want:?}"))?;
            }
        }
    }
    // just under a band edge, in cents
    let p = TaxYearParams::bundled("2019").unwrap();
    let under = repayment_limitation(
        ExactRatio::new(Money::from_cents(3_999_999), dollars(10_000)),
        FilingStatus::Single,
        &p.repayment_table,
    );
    ensure(under == RepaymentLimit::Limited(dollars(1_325)), || format!("m just below 4: {under:?}"))?;
    Ok("single 2018 (300, 775, 1300), 2019 (300, 800, 1325), unlimited at m >= 4, doubled otherwise".into())
}

fn c6_oracle_equivalence() -> Outcome {
    let scenarios = criterion_6_scenarios();
    let start = Instant::now();
    let failures: Vec<String> = scenarios
        .par_iter()
        .filter_map(|s| {
            let c = ctx(s.clone(), RoundingMode::Cent);
            let sol = optimal_deduction(&c).unwrap();
            let oracle = brute_force_max_feasible(&c, Money::ONE_DOLLAR);
            ((sol.d - oracle).abs() > Money::ONE_DOLLAR)
                .then(|| format!("{s:?}: bisection {} oracle {}", sol.d, oracle))
        })
        .collect();
    let t = start.elapsed();
    ensure(failures.is_empty(), || format!("{} mismatches, first {}", failures.len(), failures[0]))?;
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("1000 scenarios within $1 of the $1-lattice oracle, {t:.2?}"))
}

fn c7_monotonicity() -> Outcome {
    // right continuity: the value at a knot matches values just to its right
    let big = Money::from_cents(10_000_000_000);
    for year in ["2018", "2019"] {
        let p = TaxYearParams::bundled(year).unwrap();
        for (h, knot) in [(100, 0), (133, 1), (150, 2), (200, 3), (250, 4), (300, 5), (400, 5)] {
            let at = ExactRatio::new(Money::from_cents(big.cents() / 100 * h), big);
            let right = ExactRatio::new(Money::from_cents(big.cents() / 100 * h + 1), big);
            let fa = applicable_figure(at, &p.figure_table, false).unwrap();
            // m = 4 closes the domain; there is nothing to its right
            if h < 400 {
                let fr = applicable_figure(right, &p.figure_table, false).unwrap();
                ensure((fr.to_f64() - fa.to_f64()).abs() < 1e-9, || format!("{year} knot {h}: {fa} vs {fr}"))?;
            }
            ensure(fa == p.figure_table.knot_value(knot), || format!("{year} knot {h}: {fa}"))?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let scenarios: Vec<Scenario> = (0..200).map(|_| random_scenario(&mut rng)).collect();
    let violations: Vec<String> = scenarios
        .par_iter()
        .filter_map(|s| {
            let c = ctx(s.clone(), RoundingMode::Cent);
            let upper = c.eligibility_limit().unwrap_or(Money::ZERO);
            let mut prev: Option<(Money, Money, bool)> = None;
            let mut d = Money::ZERO;
            while d <= upper {
                let ptc = ptc_of_deduction(&c, d);
                let m = c.ratio(circular_ptc::household_income(&c, d));
                let in_band = m.cmp_hundredths(100).is_ge() && m.cmp_hundredths(400).is_le();
                if let Some((pd, pptc, p_band)) = prev {
                    if ptc < pptc {
                        return Some(format!("{s:?}: PTC({d}) = {ptc} < PTC({pd}) = {pptc}"));
                    }
                    if in_band && p_band && d + ptc <= pd + pptc {
                        return Some(format!("{s:?}: g not strictly increasing at {d}"));
                    }
                }
                prev = Some((d, ptc, in_band));
                d += Money::ONE_DOLLAR;
            }
            None
        })
        .collect();
    ensure(violations.is_empty(), || format!("{} violations, first {}", violations.len(), violations[0]))?;
    Ok("right continuous at every knot; PTC nondecreasing and g strictly increasing on 200 scenarios".into())
}

fn c8_divergence_interval() -> Outcome {
    let p = TaxYearParams::bundled("2018").unwrap();
    let start = Instant::now();
    let report = scan_divergence(
        &brooklyn(dollars(75_000)),
        dollars(60_000),
        dollars(75_000),
        dollars(50),
        &p,
        ScanConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let f4 = 4 * 1_624_000;
    // 4F + 0.0956 * 4F in cents
    let edge = Money::from_cents(f4 + f4 * 956 / 10_000);
    let iv = report
        .intervals_of(IntervalKind::IrsDiverges)
        .find(|iv| iv.from <= dollars(71_150) && dollars(71_150) <= iv.to)
        .ok_or_else(|| format!("no irs_diverges interval contains $71,150: {:?}", report.intervals))?;
    ensure((iv.to - edge).abs() <= dollars(200), || format!("upper edge {} vs {}", iv.to, edge))?;
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("irs_diverges {} .. {}, edge estimate {}, {t:.2?}", iv.from.pretty(), iv.to.pretty(), edge.pretty()))
}

fn c9_equation_gap() -> Outcome {
    let p = TaxYearParams::bundled("2018").unwrap();
    let template = brooklyn(dollars(30_000));
    let report = scan_divergence(&template, dollars(20_000), dollars(30_000), dollars(25), &p, ScanConfig::default())
        .map_err(|e| e.to_string())?;
    let gap = report.intervals_of(IntervalKind::EquationGap).next().ok_or("no equation_gap interval")?;
    let located: Vec<_> = report.records().filter(|r| r.equation_gap() && r.irs_diverges()).collect();
    ensure(!located.is_empty(), || "no income is both an equation gap and divergent".into())?;
    for r in &located {
        let mut s = template.clone();
        s.income = r.income;
        let c = ctx(s, RoundingMode::Cent);
        let q = c.purchased_premium();
        let m = c.ratio(circular_ptc::household_income(&c, r.bisection_d));
        ensure((m.to_f64() - 1.33).abs() < 0.05, || format!("{}: m = {m} not near 1.33", r.income))?;
        let sol = optimal_deduction(&c).unwrap();
        ensure(sol.method == SolveMethod::Bisection, || format!("{}: method {:?}", r.income, sol.method))?;
        let (next, g_next) = sol.certificate.above.ok_or("no certificate upper point")?;
        ensure(c.g(sol.d) < q && next == sol.d + Money::ONE_DOLLAR && g_next > q, || {
            format!("{}: certificate g({}) = {}, g({next}) = {g_next}", r.income, sol.d, c.g(sol.d))
        })?;
        // no cent attains Q within $1
        let upper = c.eligibility_limit().unwrap();
        let mut closest = Money::from_dollars(1_000_000);
        let mut best = Money::ZERO;
        for cents in 0..=upper.cents() {
            let d = Money::from_cents(cents);
            let g = c.g(d);
            closest = closest.min((g - q).abs());
            if g <= q {
                best = d;
            }
        }
        ensure(closest >= Money::ONE_DOLLAR, || format!("{}: some cent gets within {closest} of Q", r.income))?;
        ensure(best == sol.d, || format!("{}: cent lattice optimum {best}, bisection {}", r.income, sol.d))?;
        let it = run_default_iteration(&c, DEFAULT_MAX_ITER).unwrap();
        ensure(it.status == IterationStatus::DivergedDoNotUse, || format!("{}: {:?}", r.income, it.status))?;
    }
    Ok(format!(
        "equation_gap {} .. {}; {} incomes verified on the cent lattice, iteration diverges",
        gap.from.pretty(),
        gap.to.pretty(),
        located.len()
    ))
}

fn c10_even_subsequence() -> Outcome {
    let mut traces: Vec<(String, Vec<IterationPoint>, bool)> = Vec::new();
    let c = ctx(brooklyn(dollars(71_150)), RoundingMode::Dollar);
    let out = run_default_iteration(&c, DEFAULT_MAX_ITER).unwrap();
    traces.push(("brooklyn".into(), out.trace, out.start_clamped));
    for s in criterion_6_scenarios() {
        let c = ctx(s.clone(), RoundingMode::Cent);
        let out = run_default_iteration(&c, DEFAULT_MAX_ITER).unwrap();
        traces.push((format!("{s:?}"), out.trace, out.start_clamped));
    }
    for i in brooklyn_scan_incomes() {
        let c = ctx(brooklyn(i), RoundingMode::Cent);
        let out = run_default_iteration(&c, DEFAULT_MAX_ITER).unwrap();
        traces.push((format!("brooklyn I={i}"), out.trace, out.start_clamped));
    }
    let clamped = traces.iter().filter(|t| t.2).count();
    let bad: Vec<&(String, Vec<IterationPoint>, bool)> =
        traces.iter().filter(|t| !even_deductions_nondecreasing(&t.1)).collect();
    ensure(bad.is_empty(), || {
        format!(
            "{} of {} traces violate ({} of them with a clamped start); first: {} {:?}",
            bad.len(),
            traces.len(),
            bad.iter().filter(|t| t.2).count(),
            bad[0].0,
            bad[0].1.iter().map(|p| p.d).collect::<Vec<_>>()
        )
    })?;
    Ok(format!("{} traces ({} with clamped start), no violations", traces.len(), clamped))
}

fn c11_reconciliation_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 500 {
        attempts += 1;
        ensure(attempts < 50_000, || format!("only {checked} qualifying scenarios"))?;
        let mut s = random_scenario(&mut rng);
        s.advance_credit = Money::from_cents(rng.gen_range(1..=s.purchased_premium.cents()));
        if rng.gen_bool(0.3) {
            s.filing_status = FilingStatus::Other;
        }
        let c = ctx(s.clone(), RoundingMode::Cent);
        let sol = optimal_deduction(&c).unwrap();
        if s.advance_credit <= sol.ptc {
            continue;
        }
        checked += 1;
        let net = reconcile(&c, &sol);
        let b = net.total_benefit.ok_or_else(|| format!("{s:?}: no total benefit"))?;
        ensure(sol.ptc <= b && b < s.advance_credit, || {
            format!("{s:?}: ptc {} B {} APTC {}", sol.ptc, b, s.advance_credit)
        })?;
        ensure(sol.d + b <= s.purchased_premium, || format!("{s:?}: d + B = {} > Q", sol.d + b))?;
    }
    Ok(format!("500 scenarios with APTC > PTC(D) ({attempts} drawn)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("brooklyn divergence trace", c1_brooklyn_trace),
        ("brooklyn bisection", c2_brooklyn_bisection),
        ("dutchess simplified example", c3_dutchess),
        ("figure tables", c4_figure_tables),
        ("repayment tables", c5_repayment_tables),
        ("oracle equivalence", c6_oracle_equivalence),
        ("monotonicity and continuity", c7_monotonicity),
        ("divergence interval", c8_divergence_interval),
        ("equation gap", c9_equation_gap),
        ("even-subsequence monotonicity", c10_even_subsequence),
        ("reconciliation bounds", c11_reconciliation_bounds),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
