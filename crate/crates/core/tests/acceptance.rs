//! Acceptance suite: ten end-to-end criteria, each checked exactly and
//! reported on one line. Exits nonzero if any criterion fails.
//!
//! Runtime budgets are part of the criteria and are measured per criterion.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::BigRational;

use derived_hall::element::HallElement;
use derived_hall::graded::GradedObject;
use derived_hall::hall_derived::DerivedHall;
use derived_hall::heart::{Heart, IsoClass};
use derived_hall::verify::{self, Report, VerifyOptions};

type Check = Result<String, String>;

fn engine(n: usize, p: u32) -> DerivedHall {
    DerivedHall::new(Arc::new(Heart::linear_a(n, p).expect("A_n heart")))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn from_reports(reports: Vec<Report>) -> Check {
    let instances: usize = reports.iter().map(|r| r.instances).sum();
    let compared: usize = reports.iter().map(|r| r.compared).sum();
    match reports.iter().find(|r| !r.passed()) {
        Some(bad) => Err(bad.to_string()),
        None if instances == 0 => Err("no instances checked".into()),
        None => Ok(format!("{instances} instances, {compared} values")),
    }
}

fn degree01() -> VerifyOptions {
    VerifyOptions {
        max_dim: 1,
        degrees: 0..=1,
        seed: 0,
        samples: usize::MAX,
    }
}

fn run_suite(suite: verify::Suite, quivers: &[(usize, u32)], opts: &VerifyOptions) -> Check {
    let mut reports = Vec::new();
    for &(n, p) in quivers {
        reports.push(verify::run(&engine(n, p), suite, opts).map_err(|e| format!("A{n} p={p}: {e}"))?);
    }
    from_reports(reports)
}

fn classical_hall_numbers() -> Check {
    let s = IsoClass::indecomposable(0);
    let ss = IsoClass::from_parts([(0, 2)]);
    for (p, expected) in [(2, 3), (3, 4)] {
        let got = engine(1, p).classical().hall_number(&s, &s, &ss).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("p={p}: g_(S,S)^(S+S) = {got}, expected {expected}"));
        }
    }
    Ok("3 at p=2, 4 at p=3".into())
}

fn classical_associativity() -> Check {
    let opts = VerifyOptions {
        max_dim: 3,
        degrees: 0..=0,
        ..degree01()
    };
    run_suite(verify::Suite::Assoc, &[(2, 2)], &opts)
}

fn worked_constants() -> Check {
    let d = engine(1, 2);
    let s = GradedObject::heart(IsoClass::indecomposable(0));
    let mut first = d.unit();
    first.add_term(s.shift(1).direct_sum(&s), q(1, 2));
    let second = HallElement::term(s.shift(2).direct_sum(&s), q(2, 1));
    for (y, expected) in [(s.shift(1), first), (s.shift(2), second)] {
        let rewriting = d.basis_product(&s, &y).map_err(|e| e.to_string())?;
        let oracle = d.oracle_product(&s, &y).map_err(|e| e.to_string())?;
        if rewriting != expected || oracle != expected {
            return Err(format!("S·{y:?}: rewriting {rewriting:?}, oracle {oracle:?}, expected {expected:?}"));
        }
    }
    Ok("both products match on both paths".into())
}

fn unit_law() -> Check {
    let graded = [(1, 2), (2, 2), (1, 3), (2, 3)];
    let mut reports = Vec::new();
    for &(n, p) in &graded {
        let e = engine(n, p);
        reports.push(verify::unit(&e, &degree01()).map_err(|e| e.to_string())?);
        let heart = VerifyOptions {
            max_dim: 3,
            degrees: 0..=0,
            ..degree01()
        };
        reports.push(verify::unit(&e, &heart).map_err(|e| e.to_string())?);
    }
    from_reports(reports)
}

fn heart_property() -> Check {
    let opts = VerifyOptions {
        max_dim: 2,
        degrees: 0..=0,
        ..degree01()
    };
    run_suite(verify::Suite::Heart, &[(1, 2), (2, 2), (1, 3), (2, 3)], &opts)
}

fn homotopy_calculus() -> Check {
    let opts = VerifyOptions {
        samples: 1000,
        seed: 7,
        ..degree01()
    };
    from_reports(vec![verify::homotopy(&opts).map_err(|e| e.to_string())?])
}

/// `orbit_check = hall_number` on every heart triple with `dim z ≤ 3`.
fn orbit_stabilizer() -> Check {
    let mut checked = 0;
    for (n, p) in [(1, 2), (2, 2), (1, 3), (2, 3)] {
        let d = engine(n, p);
        let h = d.heart().clone();
        let c = d.classical();
        let classes = h.classes_up_to(3);
        for z in &classes {
            for x in &classes {
                for y in &classes {
                    let dims_ok = h
                        .dims(x)
                        .iter()
                        .zip(h.dims(y))
                        .zip(h.dims(z))
                        .all(|((a, b), c)| a + b == c);
                    if !dims_ok {
                        continue;
                    }
                    let g = c.hall_number(x, y, z).map_err(|e| e.to_string())?;
                    let orbit = c.orbit_check(x, y, z).map_err(|e| e.to_string())?;
                    if orbit != BigRational::from_integer(g.into()) {
                        return Err(format!("A{n} p={p}: {x:?}, {y:?}, {z:?}: orbit sum {orbit}, hall number {g}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} triples"))
}

/// Exhaustive at p=2, plus a seeded sample at p=3.
fn oracle_equivalence() -> Check {
    let mut reports = Vec::new();
    for n in [1, 2] {
        reports.push(verify::oracle_eq(&engine(n, 2), &degree01()).map_err(|e| e.to_string())?);
    }
    let sample = VerifyOptions {
        samples: 40,
        seed: 3,
        ..degree01()
    };
    reports.push(verify::oracle_eq(&engine(2, 3), &sample).map_err(|e| e.to_string())?);
    from_reports(reports)
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "classical Hall numbers on A1", budget: secs(1), run: classical_hall_numbers },
        Criterion { name: "classical associativity on A2", budget: secs(30), run: classical_associativity },
        Criterion {
            name: "rewriting equals closed formula",
            budget: secs(120),
            run: oracle_equivalence,
        },
        Criterion { name: "worked derived constants", budget: None, run: worked_constants },
        Criterion { name: "unit law", budget: None, run: unit_law },
        Criterion { name: "heart property", budget: None, run: heart_property },
        Criterion {
            name: "derived associativity",
            budget: secs(300),
            run: || run_suite(verify::Suite::Assoc, &[(1, 2), (2, 2)], &degree01()),
        },
        Criterion {
            name: "shift invariance",
            budget: None,
            run: || run_suite(verify::Suite::Shift, &[(1, 2), (2, 2)], &degree01()),
        },
        Criterion { name: "homotopy cardinality calculus", budget: secs(10), run: homotopy_calculus },
        Criterion { name: "orbit sums equal Hall numbers", budget: None, run: orbit_stabilizer },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(budget)) = (&outcome, c.budget) {
            if elapsed > budget {
                outcome = Err(format!("took {elapsed:.2?}, budget {budget:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {} ({detail}; {elapsed:.2?})", i + 1, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} ({elapsed:.2?})", i + 1, c.name);
                for line in why.lines() {
                    println!("    {line}");
                }
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
