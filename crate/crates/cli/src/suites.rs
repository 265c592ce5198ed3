//! Batch verification suites behind `agt verify`.
//!
//! Every suite is deterministic for a given seed, cap and mode, and stops at
//! the first counterexample.

use std::collections::BTreeSet;

use agt_core::arith::{divisors, euler_phi, is_prime, sigma, smallest_prime_not_in};
use agt_core::cardinal::{cmp, sup, Cardinal, CardinalMode, Ordering};
use agt_core::classify::{
    equalizer_member, equalizer_rule, is_in_class, EqualizerRule, GroupClass, TopologyName,
};
use agt_core::fg::{FgGroup, IndexValue};
use agt_core::finite::{FinSubgroup, FiniteGroup, DEFAULT_CAP};
use agt_core::group::{atom_table, StructuredGroup};
use agt_core::parse::parse_group;
use agt_core::sample::{random_cardinal, random_fg_instance, random_group};
use agt_core::topo::{csize, invariant, CardinalInvariantKind};
use agt_core::Verdict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SUITES: [&str; 7] = [
    "cardinal",
    "finite-lattice",
    "fg-zeta",
    "fg-closure",
    "classify",
    "dichotomy",
    "formulas",
];

/// Groups whose invariants are tabulated by hand.
pub const BATTERY: [&str; 10] = [
    "Z",
    "Z^2",
    "Q",
    "Z(2^inf)",
    "Z(2)^(aleph0)",
    "Z(8)^(c)",
    "J(2)",
    "T(2)",
    "Q + Z(2)",
    "Z + Z(6)",
];

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Case count or order bound; each suite has its own default.
    pub cap: Option<u64>,
    pub mode: CardinalMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    /// Cases run, including the failing one.
    pub cases: u64,
    pub failure: Option<String>,
}

/// One named check on a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Runner {
    cases: u64,
}

impl Runner {
    fn case(&mut self) {
        self.cases += 1;
    }
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

type SuiteFn = fn(&SuiteConfig, &mut Runner) -> Result<(), String>;

pub fn run_suite(name: &str, config: &SuiteConfig) -> Option<SuiteReport> {
    let (name, suite): (&'static str, SuiteFn) = match name {
        "cardinal" => ("cardinal", cardinal_suite),
        "finite-lattice" => ("finite-lattice", finite_lattice_suite),
        "fg-zeta" => ("fg-zeta", fg_zeta_suite),
        "fg-closure" => ("fg-closure", fg_closure_suite),
        "classify" => ("classify", classify_suite),
        "dichotomy" => ("dichotomy", dichotomy_suite),
        "formulas" => ("formulas", formulas_suite),
        _ => return None,
    };
    let mut runner = Runner { cases: 0 };
    let failure = suite(config, &mut runner).err();
    Some(SuiteReport {
        name,
        cases: runner.cases,
        failure,
    })
}

fn rng(config: &SuiteConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

fn le(o: Ordering) -> bool {
    matches!(o, Ordering::Lt | Ordering::Eq)
}

/// Checks one random triple of cardinals in both modes.
pub fn check_cardinal_triple(a: &Cardinal, b: &Cardinal, c: &Cardinal) -> Result<(), String> {
    let gch = cmp(a, b, CardinalMode::Gch);
    ensure(gch.is_decided(), || {
        format!("GCH comparison of {a} and {b} is undecided")
    })?;
    let zfc = cmp(a, b, CardinalMode::Zfc);
    ensure(!zfc.is_decided() || zfc == gch, || {
        format!("{a} vs {b}: ZFC says {zfc}, GCH says {gch}")
    })?;
    for mode in [CardinalMode::Zfc, CardinalMode::Gch] {
        let ab = cmp(a, b, mode);
        ensure(cmp(b, a, mode) == ab.reverse(), || {
            format!("{a} vs {b} is not antisymmetric in {mode}")
        })?;
        let bc = cmp(b, c, mode);
        let ac = cmp(a, c, mode);
        ensure(!(le(ab) && le(bc) && ac.is_decided()) || le(ac), || {
            format!("{a} <= {b} <= {c} but {a} vs {c} is {ac} in {mode}")
        })?;
        ensure(
            !(ab == Ordering::Lt && le(bc) && ac.is_decided()) || ac == Ordering::Lt,
            || format!("{a} < {b} <= {c} but {a} vs {c} is {ac} in {mode}"),
        )?;
        ensure(cmp(a, &a.exp2(), mode) == Ordering::Lt, || {
            format!("{a} is not below 2^{a} in {mode}")
        })?;
    }
    Ok(())
}

fn cardinal_suite(config: &SuiteConfig, runner: &mut Runner) -> Result<(), String> {
    let mut rng = rng(config);
    for _ in 0..config.cap.unwrap_or(10_000) {
        runner.case();
        let a = random_cardinal(&mut rng, 4);
        let b = random_cardinal(&mut rng, 4);
        let c = random_cardinal(&mut rng, 4);
        check_cardinal_triple(&a, &b, &c)?;
    }
    Ok(())
}

/// Every finite abelian group of order at most `bound`, as sorted lists of
/// prime-power cyclic orders.
pub fn abelian_types(bound: u64) -> Vec<Vec<u64>> {
    let prime_powers: Vec<u64> = (2..=bound)
        .filter(|&n| {
            let p = (2..=n)
                .find(|d| n % d == 0)
                .expect("n >= 2 has a prime factor");
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            m == 1
        })
        .collect();
    fn go(
        pp: &[u64],
        start: usize,
        prod: u64,
        bound: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        out.push(cur.clone());
        for i in start..pp.len() {
            if prod * pp[i] <= bound {
                cur.push(pp[i]);
                go(pp, i, prod * pp[i], bound, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&prime_powers, 0, 1, bound, &mut Vec::new(), &mut out);
    out
}

/// `G / N` is cyclic iff some coset has order `[G:N]`.
fn has_cyclic_quotient(g: &FiniteGroup, n: &FinSubgroup) -> bool {
    let index = n.index();
    (0..g.size()).any(|x| {
        let mut y = x;
        let mut k = 1;
        while !n.contains(y) {
            y = g.add(y, x);
            k += 1;
        }
        k == index
    })
}

fn multiple_subgroup(g: &FiniteGroup, m: u64) -> FinSubgroup {
    let images: Vec<usize> = (0..g.size())
        .map(|x| (0..m).fold(0, |acc, _| g.add(acc, x)))
        .collect();
    g.generated_by(&images)
}

/// Symbolic engine against brute force on one finite group.
pub fn check_finite_group(g: &FiniteGroup) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut record = |name: &'static str, passed: bool, detail: String| {
        checks.push(Check {
            name,
            passed,
            detail,
        })
    };
    let symbolic = parse_group(&g.to_string()).expect("finite groups render as group expressions");
    let subgroups = g.all_subgroups();

    let c = csize(&symbolic);
    record(
        "csize",
        c == Cardinal::finite(subgroups.len() as u64),
        format!("symbolic {c}, brute force {}", subgroups.len()),
    );

    let exponent = (0..g.size()).map(|x| g.element_order(x)).max().unwrap_or(1);
    let mut agree = symbolic.size() == Cardinal::finite(g.size() as u64)
        && symbolic.exponent() == Some(exponent.into());
    for p in (2..=g.size() as u64).filter(|&p| is_prime(p)) {
        let top = g.size() / multiple_subgroup(g, p).count();
        agree &= symbolic.quotient_prime_power(p, 1).size() == Cardinal::finite(top as u64);
        let socle = (0..g.size())
            .filter(|&x| g.element_order(x) == 1 || g.element_order(x) == p)
            .count();
        let rank = symbolic.rank_p(p).as_u64().unwrap_or(u64::MAX);
        agree &= u64::try_from(socle).ok() == p.checked_pow(rank as u32);
    }
    record(
        "invariants",
        agree,
        "order, exponent, |G/pG| and p-ranks".into(),
    );

    let fibers = g.kernel_fibers();
    let total: u64 = fibers.values().sum();
    record(
        "fiber-sum",
        total == g.size() as u64,
        format!("{total} characters, |G| = {}", g.size()),
    );

    let cyclic_quotient: Vec<&FinSubgroup> = subgroups
        .iter()
        .filter(|n| has_cyclic_quotient(g, n))
        .collect();
    let bad = subgroups.iter().find(|n| {
        let expected = if cyclic_quotient.contains(n) {
            euler_phi(n.index() as u64)
        } else {
            0
        };
        fibers.get(*n).copied().unwrap_or(0) != expected
    });
    record(
        "fiber-formula",
        bad.is_none(),
        match bad {
            None => format!("{} subgroups", subgroups.len()),
            Some(n) => format!("kernel {:?} has the wrong fiber", g.elements(n)),
        },
    );

    let cyclic = g.cyclic_subgroups().len();
    let engine_cc = g.cyclic_quotient_subgroups();
    record(
        "duality",
        engine_cc.len() == cyclic && cyclic_quotient.len() == cyclic,
        format!(
            "{} cyclic-quotient subgroups, {cyclic} cyclic subgroups",
            cyclic_quotient.len()
        ),
    );

    let mut closure: BTreeSet<FinSubgroup> = engine_cc.iter().cloned().collect();
    let mut frontier: Vec<FinSubgroup> = closure.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for c in &engine_cc {
            let t = g.intersection(&s, c);
            if closure.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    record(
        "intersections",
        closure.len() == subgroups.len(),
        format!(
            "{} of {} subgroups are intersections of cyclic-quotient subgroups",
            closure.len(),
            subgroups.len()
        ),
    );
    checks
}

fn finite_lattice_suite(config: &SuiteConfig, runner: &mut Runner) -> Result<(), String> {
    let bound = config.cap.unwrap_or(200);
    for orders in abelian_types(bound) {
        runner.case();
        let g = FiniteGroup::new(&orders, DEFAULT_CAP.max(bound)).map_err(|e| e.to_string())?;
        if let Some(c) = check_finite_group(&g).into_iter().find(|c| !c.passed) {
            return Err(format!("{g}: {} failed ({})", c.name, c.detail));
        }
    }
    Ok(())
}

/// Index-`m` subgroups of `Z^n` by brute force in `(Z/m)^n`.
pub fn brute_force_lattice_count(n: usize, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let g = FiniteGroup::new(&vec![m; n], u64::MAX).expect("no cap");
    g.all_subgroups()
        .iter()
        .filter(|s| s.index() as u64 == m)
        .count() as u64
}

fn fg_zeta_suite(_config: &SuiteConfig, runner: &mut Runner) -> Result<(), String> {
    let budget = 1u128 << 26;
    let count = |n: usize, m: u64| {
        FgGroup::free(n)
            .enumerate_finite_index(m, budget)
            .map(|v| v.len() as u64)
            .map_err(|e| e.to_string())
    };
    for m in 1..=50 {
        runner.case();
        let got = count(1, m)?;
        ensure(got == 1, || format!("Z has {got} subgroups of index {m}"))?;
        let got = count(2, m)?;
        ensure(got == sigma(m), || {
            format!("Z^2 has {got} subgroups of index {m}, sigma = {}", sigma(m))
        })?;
    }
    for m in 1..=12 {
        runner.case();
        let got = count(3, m)?;
        let series: u64 = divisors(m).iter().map(|&d| d * d * sigma(m / d)).sum();
        ensure(got == series, || {
            format!("Z^3 has {got} subgroups of index {m}, series gives {series}")
        })?;
        if m <= 6 {
            let brute = brute_force_lattice_count(3, m);
            ensure(got == brute, || {
                format!("Z^3 index {m}: enumeration {got}, brute force {brute}")
            })?;
        }
    }
    Ok(())
}

/// Closure and enclosure checks on one instance.
pub fn check_fg_instance(g: &FgGroup, h: &agt_core::fg::FgSubgroup) -> Result<(), String> {
    let describe = || format!("G = {g}, H = {}", h.render(g));
    ensure(g.nu_closure(h) == *h, || {
        format!("{}: H is not closed", describe())
    })?;
    if *h == g.whole() {
        return Ok(());
    }
    let e = g
        .enclosing_finite_index(h)
        .map_err(|err| format!("{}: {err}", describe()))?;
    ensure(g.is_subgroup_of(h, &e), || {
        format!("{}: H is not inside {}", describe(), e.render(g))
    })?;
    ensure(e != g.whole(), || {
        format!("{}: the enclosing subgroup is G", describe())
    })?;
    ensure(matches!(g.index(&e), IndexValue::Finite(_)), || {
        format!("{}: {} has infinite index", describe(), e.render(g))
    })
}

fn fg_closure_suite(config: &SuiteConfig, runner: &mut Runner) -> Result<(), String> {
    let mut rng = rng(config);
    for _ in 0..config.cap.unwrap_or(500) {
        runner.case();
        let (g, h) = random_fg_instance(&mut rng);
        check_fg_instance(&g, &h)?;
    }
    Ok(())
}

/// Every class that characterises some equalizer.
pub fn equalizer_classes(primes: &[u64]) -> Vec<GroupClass> {
    let mut topologies = TopologyName::GLOBAL.to_vec();
    for &p in primes {
        topologies.extend(TopologyName::local(p));
    }
    let mut out = Vec::new();
    for &t in &topologies {
        for &s in &topologies {
            if let EqualizerRule::Classes(cs) = equalizer_rule(t, s) {
                for c in cs {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

fn implies(a: Verdict, b: Verdict) -> bool {
    a != Verdict::True || b == Verdict::True
}

/// Implication chain, narrowness and finite-sum closure on a pair of groups.
pub fn check_classes(
    g: &StructuredGroup,
    h: &StructuredGroup,
    classes: &[GroupClass],
) -> Result<(), String> {
    use GroupClass::*;
    let is = |c| is_in_class(g, c);
    ensure(
        implies(is(StronglyNonDivisible), is(ResiduallyFinite)),
        || format!("{g} is strongly non-divisible but not residually finite"),
    )?;
    ensure(
        implies(is(Divisible), is(Narrow).and(is(AlmostDivisible))),
        || format!("{g} is divisible but not narrow and almost divisible"),
    )?;
    let c = csize(g);
    let countable = le(cmp(&c, &Cardinal::omega(), CardinalMode::Zfc));
    ensure(is(Narrow) == Verdict::from(countable), || {
        format!("{g}: narrow is {}, |C(G)| = {c}", is(Narrow))
    })?;
    let s = g.direct_sum(h);
    for &c in classes {
        if is_in_class(g, c) == Verdict::True && is_in_class(h, c) == Verdict::True {
            ensure(is_in_class(&s, c) == Verdict::True, || {
                format!("{g} and {h} are {c} but their sum is not")
            })?;
        }
    }
    Ok(())
}

fn classify_suite(config: &SuiteConfig, runner: &mut Runner) -> Result<(), String> {
    let mut rng = rng(config);
    let classes = equalizer_classes(&[2, 3, 5]);
    for _ in 0..config.cap.unwrap_or(1000) {
        runner.case();
        let g = random_group(&mut rng);
        let h = random_group(&mut rng);
        check_classes(&g, &h, &classes)?;
    }
    Ok(())
}

/// `|C(G)|` is finite, `ℵ₀`, or at least `𝔠`.
pub fn check_dichotomy(g: &StructuredGroup) -> Result<(), String> {
    let c = csize(g);
    let above_omega = cmp(&c, &Cardinal::omega(), CardinalMode::Gch) == Ordering::Gt;
    let below_continuum = cmp(&c, &Cardinal::continuum(), CardinalMode::Gch) == Ordering::Lt;
    ensure(!(above_omega && below_continuum), || {
        format!("{g} has {c} finite-index subgroups")
    })
}

fn dichotomy_suite(config: &SuiteConfig, runner: &mut Runner) -> Result<(), String> {
    let mut rng = rng(config);
    for _ in 0..config.cap.unwrap_or(1000) {
        runner.case();
        check_dichotomy(&random_group(&mut rng))?;
    }
    Ok(())
}

/// `|G/pG|` assembled summand by summand from the atom table.
fn top_quotient_size(g: &StructuredGroup, p: u64) -> Cardinal {
    g.summands()
        .map(|(atom, mult)| atom_table(*atom).quotient_by_prime(p).power(mult))
        .fold(StructuredGroup::zero(), |acc, q| acc.direct_sum(&q))
        .size()
}

/// Hand formulas for `w`, `χ`, `d` of `γ`, `ν`, `𝒫` on an infinite group.
pub fn formula_value(g: &StructuredGroup, t: TopologyName, k: CardinalInvariantKind) -> Cardinal {
    use CardinalInvariantKind::*;
    if t == TopologyName::Bohr {
        return match k {
            Weight | Character => g.size().exp2(),
            Density => g.size(),
        };
    }
    let reflection = g.hausdorff_reflection();
    if reflection.is_finite() {
        return if k == Character {
            Cardinal::one()
        } else {
            reflection.size()
        };
    }
    let mut primes: Vec<u64> = g.primes().into_iter().collect();
    primes.push(smallest_prime_not_in(&primes));
    let tops: Vec<Cardinal> = primes.iter().map(|&p| top_quotient_size(g, p)).collect();
    let with_omega = |values: Vec<Cardinal>| sup(std::iter::once(Cardinal::omega()).chain(values));
    match (t, k) {
        (TopologyName::Gamma, Weight | Character) => {
            with_omega(tops.iter().map(|c| c.exp2()).collect())
        }
        (TopologyName::Nu, Character) if reflection.exponent().is_some() => Cardinal::one(),
        (TopologyName::Nu, Character) => Cardinal::omega(),
        _ => with_omega(tops),
    }
}

fn formulas_suite(config: &SuiteConfig, runner: &mut Runner) -> Result<(), String> {
    let topologies = [TopologyName::Gamma, TopologyName::Nu, TopologyName::Bohr];
    for text in BATTERY {
        let g = parse_group(text).map_err(|e| e.to_string())?;
        for t in topologies {
            for k in CardinalInvariantKind::ALL {
                runner.case();
                let got = invariant(&g, t, k, config.mode)
                    .map_err(|e| e.to_string())?
                    .value;
                let want = formula_value(&g, t, k).normalize();
                ensure(got == want, || {
                    format!("{k}({text}, {t}) = {got}, formula gives {want}")
                })?;
            }
        }
        runner.case();
        let bounded = is_in_class(&g, GroupClass::Bounded) == Verdict::True;
        let w = |t| invariant(&g, t, CardinalInvariantKind::Weight, config.mode).map(|r| r.value);
        let (wg, wp) = (
            w(TopologyName::Gamma).map_err(|e| e.to_string())?,
            w(TopologyName::Bohr).map_err(|e| e.to_string())?,
        );
        if bounded {
            ensure(wg == wp && wp == g.size().exp2(), || {
                format!("{text} is bounded but w(gamma) = {wg}, w(bohr) = {wp}")
            })?;
        }
        let eq = equalizer_member(TopologyName::Gamma, TopologyName::Bohr, &g);
        ensure(eq == Verdict::from(bounded), || {
            format!("{text}: E(gamma, bohr) membership is {eq}")
        })?;
    }
    runner.case();
    let t2 = parse_group("T(2)").map_err(|e| e.to_string())?;
    let d = invariant(
        &t2,
        TopologyName::Nu,
        CardinalInvariantKind::Density,
        config.mode,
    )
    .map_err(|e| e.to_string())?
    .value;
    ensure(
        d == Cardinal::omega() && cmp(&d, &t2.size(), CardinalMode::Zfc) == Ordering::Lt,
        || format!("d(T(2), nu) = {d}, |T(2)| = {}", t2.size()),
    )
}
