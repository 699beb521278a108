//! Seeded self-check batteries, one per module, for the `suite` command.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::completions::{
    adele_add, adele_from_rational, adele_mul, classify_element, idele_inv, idele_mul, padic_from_rational, weak_approx_targets,
    Classification, Idele, Place, Target,
};
use crate::config::Config;
use crate::divisor::{factor_int, ideal_intersect, ideal_sum, Divisor};
use crate::error::{Error, Result};
use crate::internal::{
    embed_int, ideal_from_filter, residue_at, residue_crt_witness, value_group_compare, ClosedForm, IndexFilterSpec, IndexSet,
    IndexedElement, PrimeIdeal,
};
use crate::lattice::{divisor_box, LatticeKind, PrimeSet};
use crate::prime::{first_primes, Prime};
use crate::rational::{int, rat};
use crate::spectra::{specialization_diagram, specializes, valuation_from_prime, Valuation};
use crate::supp_ch::{
    ch_filter, exhaustive, is_prime_divisor_filter, star_radical_filter, supp_filter, DivisorFilter,
};
use crate::Decision;

pub const MODULES: [&str; 6] = ["divisor_core", "lattice_kit", "supp_ch", "internal_model", "spectra", "completions_adeles"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub module: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(module: &str) -> Tally {
        Tally { report: SuiteReport { module: module.into(), passed: 0, failed: 0, failures: Vec::new() } }
    }

    fn check(&mut self, name: impl FnOnce() -> String, ok: bool) {
        if ok {
            self.report.passed += 1;
        } else {
            self.report.failed += 1;
            self.report.failures.push(name());
        }
    }
}

pub fn run_suite(module: &str, cfg: &Config) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Tally::new(module);
    match module {
        "divisor_core" => divisor_core(&mut t, &mut rng, cfg),
        "lattice_kit" => lattice_kit(&mut t, cfg),
        "supp_ch" => supp_ch(&mut t, cfg),
        "internal_model" => internal_model(&mut t, &mut rng, cfg),
        "spectra" => spectra(&mut t),
        "completions_adeles" => completions(&mut t, &mut rng, cfg),
        other => return Err(Error::Invalid(format!("unknown module {other}"))),
    }
    Ok(t.report)
}

fn ground(n: usize) -> PrimeSet {
    first_primes(n).into_iter().collect()
}

fn divisor_core(t: &mut Tally, rng: &mut ChaCha8Rng, cfg: &Config) {
    for _ in 0..cfg.trials {
        let m: i64 = rng.gen_range(1..=100_000);
        let n: i64 = rng.gen_range(1..=100_000);
        let dm = factor_int(&BigInt::from(m)).unwrap();
        let dn = factor_int(&BigInt::from(n)).unwrap();
        let g = factor_int(&BigInt::from(m.gcd(&n))).unwrap();
        let l = factor_int(&BigInt::from(m.lcm(&n))).unwrap();
        t.check(|| format!("sum {m} {n}"), ideal_sum(&dm, &dn) == g);
        t.check(|| format!("intersect {m} {n}"), ideal_intersect(&dm, &dn) == l);
        t.check(|| format!("value {m}"), dm.value() == int(m));
    }
}

fn lattice_kit(t: &mut Tally, cfg: &Config) {
    let g = ground(cfg.max_ground.min(3));
    for l in [LatticeKind::powerset(g.clone()), LatticeKind::divisor_monoid(g.clone()).dual()] {
        let elems = l.enumerate(2).unwrap_or_default();
        for a in &elems {
            for b in &elems {
                let m = l.meet(a, b);
                t.check(|| format!("meet lower bound {a:?} {b:?}"), l.leq(&m, a) && l.leq(&m, b));
                t.check(|| format!("absorption {a:?} {b:?}"), l.join(a, &m) == *a);
            }
        }
    }
    t.check(|| "powerset distributive".into(), LatticeKind::powerset(g).is_distributive());
}

fn supp_ch(t: &mut Tally, cfg: &Config) {
    let g = ground(cfg.max_ground.min(2));
    let cap = cfg.max_exponent.min(2);
    let b = divisor_box(&g, cap);
    for x in &b {
        let f = DivisorFilter::new(&g, std::slice::from_ref(x)).unwrap();
        let u = supp_filter(&f);
        t.check(|| format!("supp ch {x}"), supp_filter(&ch_filter(&u)) == u);
        let rad = star_radical_filter(&f);
        for y in &b {
            t.check(|| format!("rad {x} {y}"), rad.contains(y).unwrap() == exhaustive::star_radical_member(&f, y));
        }
        if f.is_proper() {
            let fast = is_prime_divisor_filter(&f).unwrap();
            t.check(|| format!("prime {x}"), fast == exhaustive::is_prime(&f, cap + 1));
            let maxes = exhaustive::maximal_filters(&g, cap);
            let above = maxes.iter().filter(|m| exhaustive::contained_in(&f, m, cap)).count();
            t.check(|| format!("unique maximal {x}"), !fast || above == 1);
        }
    }
}

fn internal_model(t: &mut Tally, rng: &mut ChaCha8Rng, cfg: &Config) {
    let primes = first_primes(5);
    for _ in 0..cfg.trials {
        let k: usize = rng.gen_range(1..=primes.len());
        let support: Vec<Prime> = primes[..k].to_vec();
        let targets: Vec<BigInt> = support.iter().map(|p| BigInt::from(rng.gen_range(0..p.as_u64().unwrap()))).collect();
        let x = residue_crt_witness(&support, &targets).unwrap();
        for (i, q) in support.iter().enumerate() {
            let r = residue_at(&IndexFilterSpec::PrincipalUltra { index: i }, &support, &x).unwrap();
            t.check(|| format!("residue {x} at {q}"), r.value == targets[i]);
        }
        let n: i64 = rng.gen_range(-50..50);
        let a = embed_int(n, &IndexFilterSpec::Frechet, &IndexSet::cofinite([0, 1])).unwrap();
        let b = embed_int(n, &IndexFilterSpec::Frechet, &IndexSet::cofinite([2, 5, 9])).unwrap();
        t.check(|| format!("embed {n}"), value_group_compare(&a, &b).unwrap() == Decision::Decided(std::cmp::Ordering::Equal));
    }
    let g = ground(3);
    let m = DivisorFilter::new(&g, &[Divisor::prime_power(primes[1].clone(), 1)]).unwrap();
    t.check(|| "maximal ideal flags".into(), ideal_from_filter(&m, false).map(|i| i.flags().maximal).unwrap_or(false));
}

fn spectra(t: &mut Tally) {
    let d = specialization_diagram(&Valuation::padic(Prime::new(2).unwrap(), 2));
    t.check(|| "six nodes".into(), d.nodes.len() == 6);
    t.check(|| "six edges".into(), d.edges.len() == 6);
    let two = Prime::new(2).unwrap();
    let descriptors = [
        PrimeIdeal::Zero,
        PrimeIdeal::maximal(two.clone(), 2),
        PrimeIdeal::AtPrime { prime: two, rank: 2, level: 1 },
    ];
    for a in &descriptors {
        t.check(|| format!("center of {a}"), valuation_from_prime(a).center() == *a);
        for b in &descriptors {
            let ok = specializes(&valuation_from_prime(a), &valuation_from_prime(b)) == b.is_contained_in(a);
            t.check(|| format!("specialization {a} {b}"), ok);
        }
    }
}

fn random_rat(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(-500..=500), rng.gen_range(1..=60))
}

fn completions(t: &mut Tally, rng: &mut ChaCha8Rng, cfg: &Config) {
    let ps = first_primes(3);
    for _ in 0..cfg.trials {
        let (q, r) = (random_rat(rng), random_rat(rng));
        let p = &ps[rng.gen_range(0..ps.len())];
        let n = cfg.precision;
        let (a, b) = (padic_from_rational(&q, p, n).unwrap(), padic_from_rational(&r, p, n).unwrap());
        t.check(|| format!("add {q} {r} at {p}"), a.add(&b).unwrap().congruent_to(&(&q + &r)));
        t.check(|| format!("mul {q} {r} at {p}"), a.mul(&b).unwrap().congruent_to(&(&q * &r)));
        let places: Vec<Place> = ps.iter().cloned().map(Place::Finite).chain([Place::Real]).collect();
        let targets: Vec<Target> = places.iter().map(|v| Target::new(v.clone(), random_rat(rng), rat(1, 1000))).collect();
        let ok = weak_approx_targets(&targets, &cfg.approx).is_ok_and(|res| res.checks.iter().all(|c| c.pass));
        t.check(|| format!("approx {targets:?}"), ok);
        let (x, y) = (adele_from_rational(&q, &places, n), adele_from_rational(&r, &places, n));
        if let (Ok(x), Ok(y)) = (x, y) {
            let s = adele_from_rational(&(&q + &r), &places, n).unwrap();
            let m = adele_from_rational(&(&q * &r), &places, n).unwrap();
            t.check(|| format!("adele add {q} {r}"), adele_add(&x, &y).unwrap().approx_eq(&s));
            t.check(|| format!("adele mul {q} {r}"), adele_mul(&x, &y).unwrap().approx_eq(&m));
        }
        if !q.is_zero() {
            let s: Vec<Place> = places.iter().filter(|v| !matches!(v, Place::Finite(p) if p.as_u64().unwrap() > 5)).cloned().collect();
            if let Ok(i) = Idele::from_rational(&q, &s, n) {
                let one = idele_mul(&i, &idele_inv(&i).unwrap()).unwrap();
                t.check(|| format!("idele inverse {q}"), one.as_adele().tail_value().is_one());
            }
        }
    }
    let g3: IndexedElement = ClosedForm::GeometricPartial(ps[1].clone()).into();
    t.check(|| "geometric limit".into(), classify_element(&g3, &Place::Finite(ps[1].clone())) == Classification::Nearstandard(rat(-1, 2)));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_with_defaults() {
        let cfg = Config { trials: 20, ..Config::default() };
        for m in MODULES {
            let r = run_suite(m, &cfg).unwrap();
            assert_eq!(r.failed, 0, "{r:?}");
            assert!(r.passed > 0, "{m}");
        }
        assert!(run_suite("nope", &cfg).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = Config { trials: 10, ..Config::default() };
        assert_eq!(run_suite("completions_adeles", &cfg).unwrap(), run_suite("completions_adeles", &cfg).unwrap());
    }
}
