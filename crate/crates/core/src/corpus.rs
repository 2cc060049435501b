//! Seeded property suites over small exact corpora. Each suite generates its
//! cases from a ChaCha stream, so a `(name, seed)` pair always replays the
//! same computation.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cousin::{
    delta, delta_squared_check, localize_in_base, trace_chainmap_sides, trace_finite, trace_transitivity_check, Cell,
    CousinClass, FiniteMorphismPresentation, RationalForm,
};
use crate::derham::{compare_embeddings, stabilized_cohomology};
use crate::error::{Error, Result};
use crate::exactalg::linalg::span_rank;
use crate::exactalg::{parse_poly, IdealBasis, Monomial, MonomialOrder, Polynomial, Ring, RingRef};
use crate::forms::Form;
use crate::localcoh::{DenominatorSystem, GenFraction};
use crate::regdiff::{fundamental_class_containment, kernel_of_delta_compare};
use crate::residue::{
    residue_fiber_decompose, residue_independence_check, tate_residue_local, verify_hensel, LocalPoint, MonicPresentation,
};
use crate::scalar::{Field, Fp, PrimeField, Rational, RationalField};

pub const DEFAULT_SEED: u64 = 0x5EED_2024;

pub const SUITES: &[&str] = &[
    "residue-normalization",
    "residue-independence",
    "fiber-sum",
    "delta-squared",
    "trace-chain-map",
    "trace-transitivity",
    "regdiff-two-way",
    "fundamental-class",
    "de-rham",
    "torsion-module",
    "zero-test-oracle",
];

const MAX_REPORTED: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failed: usize,
    /// Passing cases whose compared values were nonzero (suites comparing
    /// classes only; zero elsewhere).
    pub nontrivial: usize,
    /// The first few failing cases.
    pub failures: Vec<String>,
    pub millis: u128,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.cases > 0
    }
}

struct Tally {
    cases: usize,
    failed: usize,
    nontrivial: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failed: 0, nontrivial: 0, failures: Vec::new() }
    }

    fn record(&mut self, label: impl FnOnce() -> String, outcome: Result<bool>) {
        self.cases += 1;
        let msg = match outcome {
            Ok(true) => return,
            Ok(false) => label(),
            Err(e) => format!("{}: {e}", label()),
        };
        self.failed += 1;
        if self.failures.len() < MAX_REPORTED {
            self.failures.push(msg);
        }
    }

    /// Like `record`, with `Ok((passed, nonzero))`.
    fn record_with(&mut self, label: impl FnOnce() -> String, outcome: Result<(bool, bool)>) {
        if let Ok((true, true)) = outcome {
            self.nontrivial += 1;
        }
        self.record(label, outcome.map(|(ok, _)| ok));
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::new();
    match name {
        "residue-normalization" => residue_normalization(&mut rng, &mut tally)?,
        "residue-independence" => residue_independence(&mut rng, &mut tally)?,
        "fiber-sum" => fiber_sum(&mut rng, &mut tally)?,
        "delta-squared" => delta_squared(&mut rng, &mut tally)?,
        "trace-chain-map" => trace_chain_map(&mut rng, &mut tally)?,
        "trace-transitivity" => trace_transitivity(&mut rng, &mut tally)?,
        "regdiff-two-way" => regdiff_two_way(&mut tally)?,
        "fundamental-class" => fundamental_class(&mut tally)?,
        "de-rham" => de_rham(&mut tally)?,
        "torsion-module" => torsion_module(&mut rng, &mut tally)?,
        "zero-test-oracle" => zero_test_oracle(&mut rng, &mut tally)?,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    }
    Ok(SuiteOutcome {
        suite: name.to_string(),
        seed,
        cases: tally.cases,
        failed: tally.failed,
        nontrivial: tally.nontrivial,
        failures: tally.failures,
        millis: start.elapsed().as_millis(),
    })
}

/// Runs the named suites (all when `names` is empty) on worker threads and
/// returns the outcomes in the order requested.
pub fn run_suites(names: &[&str], seed: u64) -> Result<Vec<SuiteOutcome>> {
    let names: Vec<&str> = if names.is_empty() { SUITES.to_vec() } else { names.to_vec() };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
        return Err(Error::UnknownSuite(bad.to_string()));
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = names.iter().map(|&n| s.spawn(move || run_suite(n, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("suite worker")).collect()
    })
}

fn rationals(vars: &[&str]) -> RingRef<Rational> {
    Ring::<Rational>::new(vars, RationalField).expect("valid variable names")
}

fn mod_seven(vars: &[&str]) -> RingRef<Fp> {
    Ring::<Fp>::new(vars, PrimeField::new(7).expect("7 is prime")).expect("valid variable names")
}

fn poly<F: Field>(ring: &RingRef<F>, s: &str) -> Polynomial<F> {
    parse_poly(ring, s).expect("corpus literal")
}

/// Random polynomial in `vars` with total degree at most `deg`.
fn random_poly<F: Field>(rng: &mut ChaCha8Rng, ring: &RingRef<F>, vars: &[usize], deg: u32, terms: usize) -> Polynomial<F> {
    let n = ring.nvars();
    let mut p = Polynomial::zero(ring);
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        let mut budget = rng.gen_range(0..=deg);
        for &v in vars {
            let e = rng.gen_range(0..=budget);
            exps[v] += e;
            budget -= e;
        }
        let c = rng.gen_range(-4i64..=4);
        p = p + Polynomial::monomial(ring, Monomial::new(exps), ring.int(c));
    }
    p
}

/// Random monic univariate polynomial of the given degree in `t`.
fn random_monic<F: Field>(rng: &mut ChaCha8Rng, ring: &RingRef<F>, t: usize, deg: u32) -> Polynomial<F> {
    let mut p = Polynomial::monomial(ring, Monomial::var(ring.nvars(), t, deg), ring.one_coef());
    for k in 0..deg {
        let c = rng.gen_range(-5i64..=5);
        p = p + Polynomial::monomial(ring, Monomial::var(ring.nvars(), t, k), ring.int(c));
    }
    p
}

fn top_form<F: Field>(g: Polynomial<F>) -> Form<F> {
    let idx: Vec<usize> = (0..g.ring().nvars()).collect();
    Form::basic(g, &idx)
}

fn residue_normalization(rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    fn table<F: Field>(rng: &mut ChaCha8Rng, ring: &RingRef<F>, tally: &mut Tally) -> Result<()> {
        let e = rng.gen_range(1..=5);
        let q = random_monic(rng, ring, 0, e);
        let mut ok = true;
        for i in 1..=3u32 {
            for j in 0..e {
                let tj = Polynomial::monomial(ring, Monomial::var(1, 0, j), ring.one_coef());
                let v = tate_residue_local(&tj, &q, i, 0)?;
                let expect = if (i, j) == (1, e - 1) { Polynomial::one(ring) } else { Polynomial::zero(ring) };
                ok &= v == expect;
            }
        }
        tally.record(|| format!("table for q = {q}"), Ok(ok));
        Ok(())
    }
    let (rq, rp) = (rationals(&["t"]), mod_seven(&["t"]));
    for _ in 0..100 {
        table(rng, &rq, tally)?;
        table(rng, &rp, tally)?;
    }
    Ok(())
}

fn residue_independence(rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    fn case<F: Field>(rng: &mut ChaCha8Rng, ring: &RingRef<F>, tally: &mut Tally) {
        let f = random_poly(rng, ring, &[0], 6, 4);
        let (dq, dr) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let q = random_monic(rng, ring, 0, dq);
        let r = random_monic(rng, ring, 0, dr);
        let i = rng.gen_range(1..=3);
        let q2 = &q * &r;
        tally.record(|| format!("f = {f}, q = {q}, r = {r}, i = {i}"), residue_independence_check(&f, &q, &q2, i, 0));
    }
    let (rq, rp) = (rationals(&["t"]), mod_seven(&["t"]));
    for _ in 0..100 {
        case(rng, &rq, tally);
        case(rng, &rp, tally);
    }
    Ok(())
}

fn fiber_sum(rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let ring = rationals(&["x", "t"]);
    let point = LocalPoint::origin(&ring, vec![0]);
    for _ in 0..50 {
        let roots = rng.gen_range(1..=3usize);
        let mut values: Vec<i64> = (-3..=3).collect();
        let mut fiber = Polynomial::one(&ring);
        for _ in 0..roots {
            let a = values.remove(rng.gen_range(0..values.len()));
            fiber = &fiber * &(Polynomial::var(&ring, 1) - Polynomial::int(&ring, a));
        }
        if rng.gen_bool(0.25) {
            let c = rng.gen_range(1..=3);
            fiber = &fiber * &(poly(&ring, "t^2") + Polynomial::int(&ring, c));
        }
        let e = fiber.degree_in(1).unwrap_or(0);
        let mut h = Polynomial::zero(&ring);
        for k in 0..e {
            let coeff = random_poly(rng, &ring, &[0], 2, 2);
            h = h + &coeff * &Polynomial::monomial(&ring, Monomial::var(2, 1, k), ring.one_coef());
        }
        let p = fiber + &Polynomial::var(&ring, 0) * &h;
        let f = random_poly(rng, &ring, &[0, 1], 4, 4);
        let i = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=8);
        let outcome = MonicPresentation::new(p.clone(), 1).and_then(|pres| {
            let dec = residue_fiber_decompose(&pres, &point, &f, i, n, None)?;
            Ok(dec.sums_to_global(&point) && verify_hensel(&p, &point, &dec.hensel))
        });
        tally.record(|| format!("p = {p}, f = {f}, i = {i}, N = {n}"), outcome);
    }
    Ok(())
}

/// Two-step chains `b` then `c` forming a monic tower (`b` monic in x, `c`
/// monic in y and free of x), started either at the generic cell or at a
/// cell `(a)` with `a` a polynomial in z alone.
fn delta_squared(rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let rings = [rationals(&["x", "y"]), rationals(&["x", "y", "z"])];
    for k in 0..200 {
        let ring = &rings[k % 2];
        let three = ring.nvars() == 3;
        let rest_b: Vec<usize> = if three { vec![1, 2] } else { vec![1] };
        let rest_c: Vec<usize> = if three { vec![2] } else { vec![] };
        let b = Polynomial::monomial(ring, Monomial::var(ring.nvars(), 0, rng.gen_range(1..=2)), ring.one_coef())
            + random_poly(rng, ring, &rest_b, 2, 2);
        let c = Polynomial::monomial(ring, Monomial::var(ring.nvars(), 1, rng.gen_range(1..=2)), ring.one_coef())
            + random_poly(rng, ring, &rest_c, 2, 2);
        let g = random_poly(rng, ring, &(0..ring.nvars()).collect::<Vec<_>>(), 3, 4);
        let (kb, kc) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let class = if three && rng.gen_bool(0.5) {
            let da = rng.gen_range(1..=2);
            let a = random_monic(rng, ring, 2, da);
            let ia = rng.gen_range(1..=2);
            DenominatorSystem::new(vec![a])
                .and_then(|s| GenFraction::new(top_form(g.clone()), s, vec![ia]))
                .and_then(|f| f.with_loc(b.clone(), kb))
                .and_then(|f| f.with_loc(c.clone(), kc))
                .map(CousinClass::at_block)
        } else {
            RationalForm::new(top_form(g.clone()), vec![(b.clone(), kb), (c.clone(), kc)]).map(CousinClass::Generic)
        };
        let outcome = class.and_then(|f| {
            let path = delta(&delta(&f, &b, false)?, &c, false)?;
            Ok((delta_squared_check(&f, &b, &c, false)?, !path.is_zero()?))
        });
        tally.record_with(|| format!("g = {g}, b = {b}^{kb}, c = {c}^{kc}"), outcome);
    }
    Ok(())
}

struct Curve<F: Field> {
    name: &'static str,
    ring: RingRef<F>,
    pres: FiniteMorphismPresentation<F>,
    /// Localization candidates on the source.
    poles: Vec<Polynomial<F>>,
    /// Base points under the poles.
    points: Vec<i64>,
}

fn curve_corpus<F: Field>(ctx: F::Ctx) -> Result<Vec<Curve<F>>> {
    let squaring = Ring::<F>::new(&["s", "t"], ctx.clone())?;
    let plane = Ring::<F>::new(&["x", "y"], ctx)?;
    let mk = |name, ring: &RingRef<F>, p: &str, poles: &[&str], points: &[i64]| -> Result<Curve<F>> {
        Ok(Curve {
            name,
            ring: ring.clone(),
            pres: FiniteMorphismPresentation::monogenic(parse_poly(ring, p)?, 1)?,
            poles: poles.iter().map(|s| parse_poly(ring, s)).collect::<Result<_>>()?,
            points: points.to_vec(),
        })
    };
    Ok(vec![
        mk("squaring", &squaring, "t^2 - s", &["t", "t - 1", "t + 2", "s", "s - 1", "t^2 + 1"], &[0, 1, 4])?,
        mk("node", &plane, "y^2 - x^3 - x^2", &["y", "y - x", "y - 1", "x", "x + 1", "x - 2"], &[0, -1, 2])?,
        mk("cusp", &plane, "y^2 - x^3", &["y", "y - x", "y - 1", "x", "x - 1", "y + x^2"], &[0, 1])?,
    ])
}

fn trace_chain_map(rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    fn case<F: Field>(rng: &mut ChaCha8Rng, curve: &Curve<F>, tally: &mut Tally) {
        let ring = &curve.ring;
        // t is the only monomial with nonzero trace
        let g = random_poly(rng, ring, &[0, 1], 3, 3) + &Polynomial::var(ring, 1) * &random_poly(rng, ring, &[0], 2, 2);
        let mut frac = DenominatorSystem::new(curve.pres.scheme_gens())
            .and_then(|s| GenFraction::new(top_form(g.clone()), s, vec![1]));
        let count = rng.gen_range(1..=2);
        for _ in 0..count {
            let u = curve.poles[rng.gen_range(0..curve.poles.len())].clone();
            let e = rng.gen_range(1..=2);
            frac = frac.and_then(|f| f.with_loc(u, e));
        }
        let a = if rng.gen_bool(0.75) {
            curve.points[rng.gen_range(0..curve.points.len())]
        } else {
            rng.gen_range(-2i64..=2)
        };
        let b = Polynomial::var(ring, 0) - Polynomial::int(ring, a);
        let label = match &frac {
            Ok(f) => format!("{}: {f} at {b}", curve.name),
            Err(_) => format!("{}: g = {g}", curve.name),
        };
        let outcome = frac.and_then(|f| {
            let (lhs, rhs) = trace_chainmap_sides(&curve.pres, &CousinClass::at_block(f), &b)?;
            Ok((lhs.equals(&rhs)?, !lhs.is_zero()?))
        });
        tally.record_with(|| label, outcome);
    }
    let over_q = curve_corpus::<Rational>(RationalField)?;
    let over_f7 = curve_corpus::<Fp>(PrimeField::new(7)?)?;
    for k in 0..100 {
        if k % 4 == 3 {
            case(rng, &over_f7[k % 3], tally);
        } else {
            case(rng, &over_q[k % 3], tally);
        }
    }
    Ok(())
}

fn trace_transitivity(rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    let ring = rationals(&["x", "u", "v"]);
    let towers = [("u^2 - x", "v^2 - u*v - 1"), ("u^2 - x - 1", "v^2 - u"), ("u^3 - x", "v^2 - x*v - u")];
    let poles = ["u + 1", "v - 2", "x + 1", "u - v", "x - 3"];
    for k in 0..50 {
        let (pu, pv) = towers[k % towers.len()];
        let (pu, pv) = (poly(&ring, pu), poly(&ring, pv));
        let pres = FiniteMorphismPresentation::new(vec![
            MonicPresentation::new(pu.clone(), 1)?,
            MonicPresentation::new(pv.clone(), 2)?,
        ])?;
        let corner = &Polynomial::var(&ring, 1).pow(pu.degree_in(1).unwrap_or(1) - 1)
            * &Polynomial::var(&ring, 2).pow(pv.degree_in(2).unwrap_or(1) - 1);
        let g = random_poly(rng, &ring, &[0, 1, 2], 3, 4) + &corner * &random_poly(rng, &ring, &[0], 2, 2);
        let class = if rng.gen_bool(0.5) {
            let pole = poly(&ring, poles[rng.gen_range(0..poles.len())]);
            let e = rng.gen_range(0..=2);
            DenominatorSystem::new(vec![pv.clone(), pu.clone()])
                .and_then(|s| GenFraction::new(top_form(g.clone()), s, vec![1, 1]))
                .and_then(|f| f.with_loc(pole, e))
                .map(CousinClass::at_block)
        } else {
            let a = rng.gen_range(-2i64..=2);
            let xa = Polynomial::var(&ring, 0) - Polynomial::int(&ring, a);
            let e = rng.gen_range(1..=2);
            let cell = Cell::new(vec![vec![pv.clone(), pu.clone()], vec![xa.clone()]]);
            DenominatorSystem::new(vec![pv.clone(), pu.clone(), xa])
                .and_then(|s| GenFraction::new(top_form(g.clone()), s, vec![1, 1, e]))
                .and_then(|f| CousinClass::local(cell, f))
        };
        let label = match &class {
            Ok(c) => format!("tower ({pu}, {pv}): {c}"),
            Err(_) => format!("tower ({pu}, {pv}): g = {g}"),
        };
        let outcome = class.and_then(|c| {
            let composite = trace_finite(&pres, &localize_in_base(&pres, &c)?)?;
            Ok((trace_transitivity_check(&pres, &c)?, !composite.is_zero()?))
        });
        tally.record_with(|| label, outcome);
    }
    Ok(())
}

/// Plane curves `f(x, y) = 0` presented over the x-line.
pub fn flat_curve_corpus() -> Vec<(&'static str, MonicPresentation<Rational>)> {
    let ring = rationals(&["x", "y"]);
    [("cusp", "y^2 - x^3"), ("node", "y^2 - x^3 - x^2"), ("line", "y - x"), ("conic", "y^2 - x")]
        .into_iter()
        .map(|(name, f)| (name, MonicPresentation::new(poly(&ring, f), 1).expect("monic in y")))
        .collect()
}

fn regdiff_two_way(tally: &mut Tally) -> Result<()> {
    for (name, pres) in flat_curve_corpus() {
        let outcome = kernel_of_delta_compare(&pres, 8).map(|c| c.agree);
        tally.record(|| format!("{name} at degree bound 8"), outcome);
    }
    Ok(())
}

fn fundamental_class(tally: &mut Tally) -> Result<()> {
    let mut corpus = flat_curve_corpus();
    let st = rationals(&["s", "t"]);
    corpus.push(("squaring", MonicPresentation::new(poly(&st, "t^2 - s"), 1)?));
    for (name, pres) in corpus {
        let outcome = fundamental_class_containment(&pres).map(|checks| checks.iter().all(|(_, ok)| *ok));
        tally.record(|| name.to_string(), outcome);
    }
    let f7 = mod_seven(&["x", "y"]);
    for (name, f) in [("cusp mod 7", "y^2 - x^3"), ("node mod 7", "y^2 - x^3 - x^2")] {
        let outcome = MonicPresentation::new(poly(&f7, f), 1)
            .and_then(|pres| fundamental_class_containment(&pres))
            .map(|checks| checks.iter().all(|(_, ok)| *ok));
        tally.record(|| name.to_string(), outcome);
    }
    Ok(())
}

/// Plane curves with their expected `(h⁰, h¹)` and a second embedding into
/// 3-space through a graph `z = φ(x, y)`.
pub fn de_rham_corpus() -> Vec<(&'static str, &'static str, [usize; 2], &'static str)> {
    vec![
        ("cusp", "y^2 - x^3", [1, 0], "x*y"),
        ("node", "y^2 - x^3 - x^2", [1, 1], "x^2"),
    ]
}

fn de_rham(tally: &mut Tally) -> Result<()> {
    let plane = rationals(&["x", "y"]);
    let space = rationals(&["x", "y", "z"]);
    for (name, f, expect, graph) in de_rham_corpus() {
        let first = IdealBasis::new(&plane, vec![poly(&plane, f)], MonomialOrder::Grevlex)?;
        let report = stabilized_cohomology(&first, 4, 10);
        tally.record(
            || format!("{name}: expected h = {expect:?}"),
            report.map(|r| r.is_stable() && r.dims.len() == 3 && r.dims[..2] == expect && r.dims[2] == 0),
        );
        let lifted = poly(&space, f);
        let z = poly(&space, &format!("z - ({graph})"));
        let second = IdealBasis::new(&space, vec![lifted, z], MonomialOrder::Grevlex)?;
        let images = vec![poly(&plane, "x"), poly(&plane, "y"), poly(&plane, graph)];
        let cmp = compare_embeddings(&first, &second, &images, 4, 10);
        tally.record(|| format!("{name}: plane against the graph of {graph}"), cmp.map(|c| c.agree));
    }
    Ok(())
}

/// The torsion module of the punctured line: `t·[1/t] = 0`, `t·[1/t^{i+1}] =
/// [1/t^i]`, and the classes `[c/t^i]` for `c ≠ 0` are pairwise distinct.
fn torsion_module(rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    const DEPTH: u32 = 12;
    let ring = rationals(&["t"]);
    let t = poly(&ring, "t");
    let class = |c: Polynomial<Rational>, i: u32| -> Result<GenFraction<Rational>> {
        GenFraction::from_poly(c, DenominatorSystem::new(vec![t.clone()])?, vec![i])
    };
    let one = Polynomial::one(&ring);
    tally.record(|| "t·[1/t] = 0".into(), class(one.clone(), 1).and_then(|f| f.scale(&t)?.is_zero()));
    for i in 1..DEPTH {
        let outcome = class(one.clone(), i + 1).and_then(|f| f.scale(&t)?.equals(&class(one.clone(), i)?));
        tally.record(|| format!("t·[1/t^{}] = [1/t^{i}]", i + 1), outcome);
    }
    for i in 1..=DEPTH {
        for j in i + 1..=DEPTH {
            let outcome = class(one.clone(), i).and_then(|f| Ok(!f.equals(&class(one.clone(), j)?)?));
            tally.record(|| format!("[1/t^{i}] ≠ [1/t^{j}]"), outcome);
        }
    }
    for _ in 0..20 {
        let i = rng.gen_range(1..=DEPTH);
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-9i64..=9);
        }
        let cc = Polynomial::int(&ring, c);
        let outcome = class(cc.clone(), i).and_then(|f| {
            let alive = !f.is_zero()?;
            let killed = f.scale(&t.pow(i))?.is_zero()?;
            let socle = f.scale(&t.pow(i - 1))?.equals(&class(cc.clone(), 1)?)?;
            Ok(alive && killed && socle)
        });
        tally.record(|| format!("[{c}/t^{i}]"), outcome);
    }
    Ok(())
}

/// Membership of `f` (degree ≤ `deg`) in `(x^i, y^j)` by rank comparison
/// over the monomials of degree ≤ `deg`.
pub fn monomial_ideal_oracle(f: &Polynomial<Rational>, i: u32, j: u32, deg: u32) -> bool {
    let ring = f.ring();
    let monomials: Vec<Monomial> =
        (0..=deg).flat_map(|d| (0..=d).map(move |a| Monomial::new(vec![a, d - a]))).collect();
    let vector = |p: &Polynomial<Rational>| -> Vec<Rational> { monomials.iter().map(|m| p.coeff(m)).collect() };
    let mut span = Vec::new();
    for m in &monomials {
        for g in [Monomial::new(vec![i, 0]), Monomial::new(vec![0, j])] {
            let prod = m.mul(&g);
            if prod.degree() <= deg {
                span.push(vector(&Polynomial::monomial(ring, prod, ring.one_coef())));
            }
        }
    }
    let before = span_rank(ring.ctx(), &span);
    span.push(vector(f));
    span_rank(ring.ctx(), &span) == before
}

fn zero_test_oracle(rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<()> {
    const DEG: u32 = 6;
    let ring = rationals(&["x", "y"]);
    let (x, y) = (poly(&ring, "x"), poly(&ring, "y"));
    for i in 1..=4u32 {
        for j in 1..=4u32 {
            let system = DenominatorSystem::new(vec![x.clone(), y.clone()])?;
            for k in 0..10 {
                let f = if k % 2 == 0 {
                    random_poly(rng, &ring, &[0, 1], DEG, 5)
                } else {
                    let a = random_poly(rng, &ring, &[0, 1], DEG - i, 2);
                    let b = random_poly(rng, &ring, &[0, 1], DEG - j, 2);
                    let mut f = &a * &x.pow(i) + &b * &y.pow(j);
                    if k % 4 == 3 {
                        f = f + random_poly(rng, &ring, &[0, 1], DEG, 1);
                    }
                    f
                };
                let expect = monomial_ideal_oracle(&f, i, j, DEG);
                let outcome = GenFraction::from_poly(f.clone(), system.clone(), vec![i, j])
                    .and_then(|g| g.is_zero())
                    .map(|z| z == expect);
                tally.record(|| format!("[{f} / (x^{i}, y^{j})], oracle {expect}"), outcome);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nonexistent", 1), Err(Error::UnknownSuite(_))));
        assert!(matches!(run_suites(&["fiber-sum", "bogus"], 1), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn suites_replay() {
        let a = run_suite("residue-independence", 7).unwrap();
        let b = run_suite("residue-independence", 7).unwrap();
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!((a.cases, a.failures), (b.cases, b.failures));
    }

    #[test]
    fn oracle_sanity() {
        let ring = rationals(&["x", "y"]);
        assert!(monomial_ideal_oracle(&poly(&ring, "x^2*y + y^3"), 2, 3, 6));
        assert!(!monomial_ideal_oracle(&poly(&ring, "x*y^2"), 2, 3, 6));
    }
}
