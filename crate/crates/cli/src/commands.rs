//! Command implementations; each returns the JSON document to print.

use std::cmp::Ordering;

use hdk_core::completions::{
    adele_add, adele_from_rational, adele_mul, classify_element, idele_inv, padic_from_rational, weak_approx_targets, Idele,
};
use hdk_core::config::Config;
use hdk_core::divisor::{
    crt_solve, factor_int, factor_rational, ideal_intersect, ideal_invert, ideal_product, ideal_sum, radical, Divisor,
    IntegralDivisor,
};
use hdk_core::internal::{
    embed_int, ideal_from_filter, residue_at, residue_crt_witness, value_group_compare, ConvexSubgroup, Family, IndexedElement,
    ValueGroupElement,
};
use hdk_core::lattice::{
    filter_from_generators, filter_is_maximal, filter_is_prime, filter_is_proper, Element, FilterSpec, Ground, LatticeKind,
    SymbolicGround,
};
use hdk_core::spectra::{
    horizontal_specialization, node_label, pseudo_arch_classify, specialization_diagram, valuation_from_prime,
    vertical_generization, Valuation,
};
use hdk_core::suite::{run_suite, MODULES};
use hdk_core::supp_ch::{supp, DivisorFilter};
use hdk_core::{Decision, Error};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::{
    parse, AdeleArgs, AdeleOp, ApproxArgs, ClassifyArgs, Cmd, Failure, IdealArgs, IdealOp, LatticeChoice, LatticeCmd, Operand,
    PadicArgs, PadicOp, ResidueArgs, SuiteArgs, ValuationArgs, ValuationCmd, ValueGroupCmd,
};

pub enum Output {
    Json(Value),
    Text(String),
}

type Res = Result<Output, Failure>;

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

pub fn run(cmd: Cmd, cfg: &Config) -> Res {
    match cmd {
        Cmd::Factor { q } => Ok(Output::Json(to_json(&factor_rational(&q)?))),
        Cmd::Ideal(a) => ideal(a),
        Cmd::Lattice { cmd } => lattice(cmd),
        Cmd::Classify(a) => classify(a),
        Cmd::Residue(a) => residue(a),
        Cmd::Valuegroup { cmd } => valuegroup(cmd),
        Cmd::Valuation(a) => valuation(a),
        Cmd::Padic(a) => padic(a, cfg),
        Cmd::Approx(a) => approx(a, cfg),
        Cmd::Adele(a) => adele(a, cfg),
        Cmd::Suite(a) => suite(a, cfg),
    }
}

fn as_divisor(o: &Operand) -> Result<Divisor, Failure> {
    match o {
        Operand::Divisor(d) => Ok(d.clone()),
        Operand::Rational(q) => Ok(factor_rational(q)?),
    }
}

fn ideal(a: IdealArgs) -> Res {
    let ds = a.operands.iter().map(as_divisor).collect::<Result<Vec<_>, _>>()?;
    let arity = |n: usize| if ds.len() == n { Ok(()) } else { Err(usage(format!("{:?} takes {n} operand(s)", a.op))) };
    let d = match a.op {
        IdealOp::Sum | IdealOp::Intersect | IdealOp::Product => {
            arity(2)?;
            match a.op {
                IdealOp::Sum => ideal_sum(&ds[0], &ds[1]),
                IdealOp::Intersect => ideal_intersect(&ds[0], &ds[1]),
                _ => ideal_product(&ds[0], &ds[1]),
            }
        }
        IdealOp::Invert => {
            arity(1)?;
            ideal_invert(&ds[0])
        }
        IdealOp::Radical => {
            arity(1)?;
            radical(&IntegralDivisor::try_from(ds[0].clone())?).into_divisor()
        }
        IdealOp::Crt => return crt(&a.congruences),
        IdealOp::Classify => {
            let ground = a.ground.ok_or_else(|| usage("classify needs --ground"))?;
            let f = DivisorFilter::new(&ground, &ds)?;
            return Ok(Output::Json(filter_report(&f)));
        }
    };
    Ok(Output::Json(to_json(&d)))
}

fn crt(congruences: &[String]) -> Res {
    let mut cs = Vec::new();
    for c in congruences {
        let (r, m) = c.split_once(':').ok_or_else(|| usage(format!("expected residue:modulus, got {c}")))?;
        let r: BigInt = r.trim().parse().map_err(|_| usage(format!("bad residue {r}")))?;
        let m: BigInt = m.trim().parse().map_err(|_| usage(format!("bad modulus {m}")))?;
        cs.push((r, IntegralDivisor::try_from(factor_int(&m)?)?));
    }
    if cs.is_empty() {
        return Err(usage("crt needs at least one --congruence"));
    }
    let x = crt_solve(&cs)?;
    Ok(Output::Json(json!({ "x": x.to_string() })))
}

fn filter_report(f: &DivisorFilter) -> Value {
    let flags = ideal_from_filter(f, true).expect("unit ideal allowed").flags();
    json!({
        "generator": f.generator(),
        "support": supp(f.generator()),
        "proper": flags.proper,
        "prime": flags.prime,
        "maximal": flags.maximal,
        "star_radical": flags.star_radical,
        "internal": flags.internal,
    })
}

fn lattice(cmd: LatticeCmd) -> Res {
    let LatticeCmd::Classify { kind, ground, filters, frechet } = cmd;
    let symbolic = ground.trim() == "all";
    let primes = if symbolic { Default::default() } else { parse::prime_set(&ground).map_err(usage)? };
    if frechet {
        if !symbolic || kind != LatticeChoice::FinSubsets {
            return Err(usage("--frechet needs --kind fin-subsets --ground all"));
        }
        let spec = FilterSpec::Frechet(SymbolicGround::AllPrimes);
        return Ok(Output::Json(json!({
            "proper": true,
            "prime": filter_is_prime(&spec)?,
            "maximal": filter_is_maximal(&spec)?,
        })));
    }
    let lat = match kind {
        LatticeChoice::FinSubsets if symbolic => LatticeKind::FinSubsets { ground: Ground::Symbolic(SymbolicGround::AllPrimes) },
        _ if symbolic => return Err(usage("only fin-subsets accepts --ground all")),
        LatticeChoice::Powerset => LatticeKind::powerset(primes),
        LatticeChoice::FinSubsets => LatticeKind::fin_subsets(primes),
        LatticeChoice::DivisorMonoid => LatticeKind::divisor_monoid(primes),
        LatticeChoice::DualPowerset => LatticeKind::powerset(primes).dual(),
        LatticeChoice::DualDivisorMonoid => LatticeKind::divisor_monoid(primes).dual(),
    };
    let gens = filters
        .iter()
        .map(|s| serde_json::from_str::<Element>(s).map_err(|e| usage(format!("bad generator {s}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if gens.iter().any(|g| !lat.contains(g)) {
        return Err(Error::ElementNotInLattice.into());
    }
    let basis = filter_from_generators(&lat, &gens)?;
    let proper = filter_is_proper(&basis);
    let spec = FilterSpec::Basis(basis.clone());
    let decide = |r: hdk_core::Result<Decision<bool>>| -> Result<Value, Failure> {
        match r {
            Ok(d) => Ok(to_json(&d)),
            Err(Error::ImproperFilter) => Ok(json!(false)),
            Err(e) => Err(e.into()),
        }
    };
    Ok(Output::Json(json!({
        "generators": basis.generators(),
        "proper": proper,
        "prime": decide(filter_is_prime(&spec))?,
        "maximal": decide(filter_is_maximal(&spec))?,
    })))
}

fn classify(a: ClassifyArgs) -> Res {
    if a.divisor_filter {
        let ground = a.ground.ok_or_else(|| usage("--divisor-filter needs --ground"))?;
        let f = DivisorFilter::new(&ground, &a.gens)?;
        return Ok(Output::Json(filter_report(&f)));
    }
    let x = a.element.ok_or_else(|| usage("classify needs --divisor-filter or --element"))?;
    let out = match &a.place {
        Some(v) => json!({ "place": v, "class": classify_element(&x, v) }),
        None => json!({ "class": pseudo_arch_classify(&x)? }),
    };
    Ok(Output::Json(out))
}

fn residue(a: ResidueArgs) -> Res {
    let support: Vec<_> = a.support.into_iter().collect();
    let (x, witness) = match (&a.targets, &a.x) {
        (Some(t), None) => {
            let ts = t
                .split(',')
                .map(|s| s.trim().parse::<BigInt>().map_err(|_| usage(format!("bad target {s}"))))
                .collect::<Result<Vec<_>, _>>()?;
            (residue_crt_witness(&support, &ts)?, true)
        }
        (None, Some(q)) if q.is_integer() => (q.to_integer(), false),
        (None, Some(_)) => return Err(Failure::Domain(Error::NonIntegral)),
        _ => return Err(usage("give exactly one of --x and --targets")),
    };
    let residues: Vec<Value> = match &a.filter {
        Some(f) => vec![to_json(&residue_at(f, &support, &x)?)],
        None => (0..support.len())
            .map(|i| {
                let f = hdk_core::internal::IndexFilterSpec::PrincipalUltra { index: i };
                residue_at(&f, &support, &x).map(|r| to_json(&r))
            })
            .collect::<Result<_, _>>()?,
    };
    let mut out = json!({ "x": x.to_string(), "residues": residues });
    if witness {
        out["witness"] = json!(true);
    }
    Ok(Output::Json(out))
}

fn ordering_json(d: Decision<Ordering>) -> Value {
    match d {
        Decision::Decided(Ordering::Less) => json!("less"),
        Decision::Decided(Ordering::Equal) => json!("equal"),
        Decision::Decided(Ordering::Greater) => json!("greater"),
        Decision::Undecidable => json!("undecidable"),
    }
}

fn valuegroup(cmd: ValueGroupCmd) -> Res {
    match cmd {
        ValueGroupCmd::Compare { a, b, filter } => {
            let wrap = |x: IndexedElement| ValueGroupElement { family: Family::Closed(x), modulus: filter.clone() };
            let d = value_group_compare(&wrap(a), &wrap(b))?;
            Ok(Output::Json(json!({ "order": ordering_json(d) })))
        }
        ValueGroupCmd::Embed { k, filter, witnesses } => {
            let els = witnesses.iter().map(|w| embed_int(k, &filter, w)).collect::<hdk_core::Result<Vec<_>>>()?;
            let mut all_equal = true;
            for e in &els[1..] {
                all_equal &= value_group_compare(&els[0], e)? == Decision::Decided(Ordering::Equal);
            }
            Ok(Output::Json(json!({ "k": k, "witnesses": witnesses, "equal": all_equal })))
        }
    }
}

fn valuation_view(v: &Valuation) -> Value {
    let (rank, restrict, quotient) = v.shape();
    json!({
        "name": node_label(v),
        "prime": v.prime(),
        "rank": rank,
        "restrict": restrict,
        "quotient": quotient,
        "group": v.group(),
        "support": v.support().to_string(),
        "center": v.center().to_string(),
        "trivial": v.is_trivial(),
    })
}

fn base_valuation(at: &str, rank: usize) -> Result<Valuation, Failure> {
    if !(1..=2).contains(&rank) {
        return Err(usage("--rank is 1 or 2"));
    }
    Ok(valuation_from_prime(&parse::prime_ideal(at, rank).map_err(usage)?))
}

fn valuation(a: ValuationArgs) -> Res {
    let moved = |at: &str, rank: usize, segment: usize, vertical: bool| -> Res {
        let v = base_valuation(at, rank)?;
        let u = ConvexSubgroup { group: v.group(), rank: segment };
        let w = if vertical { vertical_generization(&v, &u)? } else { horizontal_specialization(&v, &u)? };
        Ok(Output::Json(json!({ "from": valuation_view(&v), "to": valuation_view(&w) })))
    };
    match a.cmd {
        Some(ValuationCmd::Specialize { at, rank, segment }) => moved(&at, rank, segment, false),
        Some(ValuationCmd::Generize { at, rank, segment }) => moved(&at, rank, segment, true),
        Some(ValuationCmd::Diagram { at, dot }) => {
            let v = base_valuation(&at, 2)?;
            if v.is_trivial() || v.center().to_string().ends_with("^inf") {
                return Err(usage("diagram needs --at m_p"));
            }
            let d = specialization_diagram(&v);
            if dot {
                return Ok(Output::Text(d.to_dot()));
            }
            Ok(Output::Json(to_json(&d)))
        }
        None => {
            let at = a.at.ok_or_else(|| usage("valuation needs --at"))?;
            let v = base_valuation(&at, a.rank)?;
            let mut out = valuation_view(&v);
            if let Some(x) = &a.of {
                out["value"] = match v.eval(x) {
                    Decision::Decided(Some(val)) => json!(val),
                    Decision::Decided(None) => json!("inf"),
                    Decision::Undecidable => json!("undecidable"),
                };
            }
            Ok(Output::Json(out))
        }
    }
}

fn padic(a: PadicArgs, cfg: &Config) -> Res {
    let n = a.precision.unwrap_or(cfg.precision);
    let x = padic_from_rational(&a.q, &a.p, n)?;
    let y = || -> Result<_, Failure> {
        let r = a.r.as_ref().ok_or_else(|| usage("this --op needs --r"))?;
        Ok(padic_from_rational(r, &a.p, n)?)
    };
    let result = match a.op {
        None => x,
        Some(PadicOp::Add) => x.add(&y()?)?,
        Some(PadicOp::Sub) => x.sub(&y()?)?,
        Some(PadicOp::Mul) => x.mul(&y()?)?,
        Some(PadicOp::Div) => x.div(&y()?)?,
        Some(PadicOp::Inv) => x.inv()?,
    };
    Ok(Output::Json(json!({
        "result": result,
        "representative": hdk_core::rational::format_rational(&result.to_rational()),
        "abs_precision": result.abs_precision(),
    })))
}

fn approx(a: ApproxArgs, cfg: &Config) -> Res {
    let mut limits = cfg.approx;
    if let Some(s) = a.max_steps {
        limits.max_steps = s;
    }
    if let Some(e) = a.max_exponent {
        limits.max_exponent = e;
    }
    let r = weak_approx_targets(&a.targets, &limits)?;
    let v = to_json(&r);
    if r.checks.iter().all(|c| c.pass) {
        Ok(Output::Json(v))
    } else {
        Err(Failure::Checks(v))
    }
}

fn adele(a: AdeleArgs, cfg: &Config) -> Res {
    let n = a.precision.unwrap_or(cfg.precision);
    let x = adele_from_rational(&a.x, &a.places, n)?;
    let y = || -> Result<_, Failure> {
        let r = a.y.as_ref().ok_or_else(|| usage("this --op needs --y"))?;
        Ok(adele_from_rational(r, &a.places, n)?)
    };
    let out = match a.op {
        AdeleOp::Embed => x,
        AdeleOp::Add => adele_add(&x, &y()?)?,
        AdeleOp::Mul => adele_mul(&x, &y()?)?,
        AdeleOp::Inv => {
            if a.x.is_zero() {
                return Err(Failure::Domain(Error::NotAnIdele));
            }
            idele_inv(&Idele::try_from(x)?)?.into_adele()
        }
    };
    Ok(Output::Json(to_json(&out)))
}

fn suite(a: SuiteArgs, cfg: &Config) -> Res {
    let mut cfg = cfg.clone();
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    let modules: Vec<&str> = if a.module == "all" { MODULES.to_vec() } else { vec![a.module.as_str()] };
    if let Some(m) = modules.iter().find(|m| !MODULES.contains(m)) {
        return Err(usage(format!("unknown module {m}; expected one of {}", MODULES.join(", "))));
    }
    let reports = modules.iter().map(|m| run_suite(m, &cfg)).collect::<hdk_core::Result<Vec<_>>>()?;
    let failed: usize = reports.iter().map(|r| r.failed).sum();
    let v = if reports.len() == 1 {
        to_json(&reports[0])
    } else {
        json!({
            "seed": cfg.seed,
            "passed": reports.iter().map(|r| r.passed).sum::<usize>(),
            "failed": failed,
            "reports": reports,
        })
    };
    if failed == 0 {
        Ok(Output::Json(v))
    } else {
        Err(Failure::Checks(v))
    }
}
