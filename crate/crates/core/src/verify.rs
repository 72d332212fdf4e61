//! Identity checks over exhaustive (or seeded random) families of instances.
//!
//! Every suite returns a [`Report`] with the number of instances checked and
//! each counterexample written out in full. Resource-bound failures are
//! returned as errors rather than recorded as counterexamples.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::element::{fraction_string, HallElement};
use crate::error::{Error, Result};
use crate::graded::{graded_objects, GradedObject};
use crate::hall_derived::{heart_embed, shift_action, DerivedElement, DerivedHall};
use crate::heart::IsoClass;
use crate::homotopy::{gen, pullback, pushforward_fibers, pushforward_l1, FiberPresentation, LFMap};
use crate::label::{graded_label, heart_label};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Assoc,
    Unit,
    Heart,
    OracleEq,
    Shift,
    Homotopy,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Assoc, Suite::Unit, Suite::Heart, Suite::OracleEq, Suite::Shift, Suite::Homotopy];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Assoc => "assoc",
            Suite::Unit => "unit",
            Suite::Heart => "heart",
            Suite::OracleEq => "oracle-eq",
            Suite::Shift => "shift",
            Suite::Homotopy => "homotopy",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?} (expected assoc, unit, heart, oracle-eq, shift or homotopy)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Heart-only runs bound the combined total dimension of each instance;
    /// graded runs bound the total dimension of every component.
    pub max_dim: usize,
    pub degrees: RangeInclusive<i64>,
    pub seed: u64,
    /// Random instances per identity in the homotopy suite, and the cap above
    /// which oracle-eq samples pairs instead of covering them all.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_dim: 1,
            degrees: 0..=1,
            seed: 0,
            samples: 1000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub instances: usize,
    /// Individual structure constants (or function values) compared.
    pub compared: usize,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
}

impl Report {
    fn new(suite: Suite) -> Self {
        Report {
            suite: suite.to_string(),
            ..Report::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, outcomes: Vec<Outcome>) {
        for o in outcomes {
            self.instances += 1;
            self.compared += o.compared;
            self.failures.extend(o.failure);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "suite {}: {status} ({} instances, {} values compared, {} failures)",
            self.suite,
            self.instances,
            self.compared,
            self.failures.len()
        )?;
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for c in &self.failures {
            writeln!(f, "  counterexample: {c}")?;
        }
        Ok(())
    }
}

struct Outcome {
    compared: usize,
    failure: Option<String>,
}

fn render(engine: &DerivedHall, e: &DerivedElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    e.iter()
        .map(|(z, c)| format!("({})·{}", fraction_string(c), graded_label(engine.heart(), z)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Compares two elements coefficient by coefficient over the union of supports.
fn compare(engine: &DerivedHall, what: String, lhs: &DerivedElement, rhs: &DerivedElement) -> Outcome {
    let mut labels: Vec<&GradedObject> = lhs.labels().chain(rhs.labels()).collect();
    labels.sort();
    labels.dedup();
    Outcome {
        compared: labels.len(),
        failure: (lhs != rhs).then(|| format!("{what}: {} ≠ {}", render(engine, lhs), render(engine, rhs))),
    }
}

fn collect<T: Send>(items: Vec<Result<T>>) -> Result<Vec<T>> {
    items.into_iter().collect()
}

fn heart_family(engine: &DerivedHall, max_dim: usize) -> Vec<IsoClass> {
    engine.heart().classes_up_to(max_dim)
}

fn graded_family(engine: &DerivedHall, opts: &VerifyOptions) -> Vec<GradedObject> {
    graded_objects(engine.heart(), opts.degrees.clone(), opts.max_dim)
}

fn pairs<T>(family: &[T]) -> Vec<(&T, &T)> {
    family.iter().flat_map(|x| family.iter().map(move |y| (x, y))).collect()
}

fn triples<T>(family: &[T]) -> Vec<[&T; 3]> {
    pairs(family)
        .into_iter()
        .flat_map(|(x, y)| family.iter().map(move |z| [x, y, z]))
        .collect()
}

fn is_heart_run(opts: &VerifyOptions) -> bool {
    *opts.degrees.start() == 0 && *opts.degrees.end() == 0
}

pub fn run(engine: &DerivedHall, suite: Suite, opts: &VerifyOptions) -> Result<Report> {
    match suite {
        Suite::Assoc => assoc(engine, opts),
        Suite::Unit => unit(engine, opts),
        Suite::Heart => heart(engine, opts),
        Suite::OracleEq => oracle_eq(engine, opts),
        Suite::Shift => shift(engine, opts),
        Suite::Homotopy => homotopy(opts),
    }
}

/// `(χ_x χ_y) χ_z = χ_x (χ_y χ_z)`. Heart runs use the classical product on
/// triples of combined total dimension at most `max_dim`; graded runs use the
/// rewriting product on every triple of the family.
pub fn assoc(engine: &DerivedHall, opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::new(Suite::Assoc);
    if is_heart_run(opts) {
        let h = engine.heart();
        let c = engine.classical();
        let family = heart_family(engine, opts.max_dim);
        let triples: Vec<[&IsoClass; 3]> = triples(&family)
            .into_iter()
            .filter(|t| t.iter().map(|x| h.total_dim(x)).sum::<usize>() <= opts.max_dim)
            .collect();
        let outcomes = collect(
            triples
                .par_iter()
                .map(|&[x, y, z]| {
                    let (ex, ey, ez) = (HallElement::basis(x.clone()), HallElement::basis(y.clone()), HallElement::basis(z.clone()));
                    let lhs = c.hall_product(&c.hall_product(&ex, &ey)?, &ez)?;
                    let rhs = c.hall_product(&ex, &c.hall_product(&ey, &ez)?)?;
                    let what = format!("({}·{})·{}", heart_label(h, x), heart_label(h, y), heart_label(h, z));
                    Ok(compare(engine, what, &heart_embed(&lhs), &heart_embed(&rhs)))
                })
                .collect(),
        )?;
        report.absorb(outcomes);
        report.notes.push(format!("classical product, heart triples of total dimension ≤ {}", opts.max_dim));
    } else {
        let family = graded_family(engine, opts);
        let triples = triples(&family);
        let outcomes = collect(
            triples
                .par_iter()
                .map(|&[x, y, z]| {
                    let (ex, ey, ez) = (HallElement::basis(x.clone()), HallElement::basis(y.clone()), HallElement::basis(z.clone()));
                    let lhs = engine.normal_form_product(&engine.normal_form_product(&ex, &ey)?, &ez)?;
                    let rhs = engine.normal_form_product(&ex, &engine.normal_form_product(&ey, &ez)?)?;
                    let h = engine.heart();
                    let what = format!("({}·{})·{}", graded_label(h, x), graded_label(h, y), graded_label(h, z));
                    Ok(compare(engine, what, &lhs, &rhs))
                })
                .collect(),
        )?;
        report.absorb(outcomes);
        report.notes.push(format!(
            "rewriting product, all triples supported in degrees {}..{} with component dimension ≤ {}",
            opts.degrees.start(),
            opts.degrees.end(),
            opts.max_dim
        ));
    }
    Ok(report)
}

/// `χ_0` is a two-sided unit for the rewriting, closed-formula and (on heart
/// objects) classical products.
pub fn unit(engine: &DerivedHall, opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::new(Suite::Unit);
    let family = graded_family(engine, opts);
    let one = GradedObject::zero();
    let outcomes = collect(
        family
            .par_iter()
            .map(|x| {
                let e = HallElement::basis(x.clone());
                let label = graded_label(engine.heart(), x);
                let mut checks = vec![
                    compare(engine, format!("1·{label} (rewriting)"), &engine.basis_product(&one, x)?, &e),
                    compare(engine, format!("{label}·1 (rewriting)"), &engine.basis_product(x, &one)?, &e),
                    compare(engine, format!("1·{label} (oracle)"), &engine.oracle_product(&one, x)?, &e),
                    compare(engine, format!("{label}·1 (oracle)"), &engine.oracle_product(x, &one)?, &e),
                ];
                if x.is_heart() {
                    let c = engine.classical();
                    let hx = HallElement::basis(x.component(0));
                    checks.push(compare(engine, format!("1·{label} (classical)"), &heart_embed(&c.hall_product(&c.unit(), &hx)?), &e));
                    checks.push(compare(engine, format!("{label}·1 (classical)"), &heart_embed(&c.hall_product(&hx, &c.unit())?), &e));
                }
                Ok(checks)
            })
            .collect(),
    )?;
    report.absorb(outcomes.into_iter().flatten().collect());
    Ok(report)
}

/// On heart objects the derived constants (both engines) equal the classical
/// Hall numbers, and products stay in degree 0.
pub fn heart(engine: &DerivedHall, opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::new(Suite::Heart);
    let h = engine.heart();
    let family = heart_family(engine, opts.max_dim);
    let pairs: Vec<(&IsoClass, &IsoClass)> = pairs(&family);
    let outcomes = collect(
        pairs
            .par_iter()
            .map(|&(x, y)| {
                let classical = heart_embed(&engine.classical().basis_product(x, y)?);
                let (gx, gy) = (GradedObject::heart(x.clone()), GradedObject::heart(y.clone()));
                let what = format!("{}·{}", heart_label(h, x), heart_label(h, y));
                let rewriting = engine.basis_product(&gx, &gy)?;
                let oracle = engine.oracle_product(&gx, &gy)?;
                let mut out = vec![
                    compare(engine, format!("{what} rewriting vs classical"), &rewriting, &classical),
                    compare(engine, format!("{what} oracle vs classical"), &oracle, &classical),
                ];
                if let Some(z) = rewriting.labels().find(|z| !z.is_heart()) {
                    out.push(Outcome {
                        compared: 0,
                        failure: Some(format!("{what} has support outside the heart: {}", graded_label(h, z))),
                    });
                }
                Ok(out)
            })
            .collect(),
    )?;
    report.absorb(outcomes.into_iter().flatten().collect());
    report.notes.push(format!("{} heart pairs with total dimension ≤ {}", pairs.len(), opts.max_dim));
    Ok(report)
}

/// The rewriting product agrees with the closed formula on every pair (or on
/// a seeded sample once the pair count exceeds `samples`).
pub fn oracle_eq(engine: &DerivedHall, opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::new(Suite::OracleEq);
    let family = graded_family(engine, opts);
    let mut pairs: Vec<(&GradedObject, &GradedObject)> = pairs(&family);
    if pairs.len() > opts.samples {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        pairs.shuffle(&mut rng);
        pairs.truncate(opts.samples);
        pairs.sort();
        report.notes.push(format!("sampled {} pairs with seed {}", opts.samples, opts.seed));
    }
    let outcomes = collect(
        pairs
            .par_iter()
            .map(|&(x, y)| {
                let h = engine.heart();
                let what = format!("{}·{}", graded_label(h, x), graded_label(h, y));
                Ok(compare(engine, what, &engine.basis_product(x, y)?, &engine.oracle_product(x, y)?))
            })
            .collect(),
    )?;
    report.absorb(outcomes);
    Ok(report)
}

/// `g_{x,y}^z = g_{x[1],y[1]}^{z[1]}` for both engines.
pub fn shift(engine: &DerivedHall, opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::new(Suite::Shift);
    let family = graded_family(engine, opts);
    let pairs: Vec<(&GradedObject, &GradedObject)> = pairs(&family);
    let outcomes = collect(
        pairs
            .par_iter()
            .map(|&(x, y)| {
                let h = engine.heart();
                let what = format!("{}·{}", graded_label(h, x), graded_label(h, y));
                let (sx, sy) = (x.shift(1), y.shift(1));
                Ok(vec![
                    compare(
                        engine,
                        format!("{what} shifted (rewriting)"),
                        &shift_action(&engine.basis_product(x, y)?, 1),
                        &engine.basis_product(&sx, &sy)?,
                    ),
                    compare(
                        engine,
                        format!("{what} shifted (oracle)"),
                        &shift_action(&engine.oracle_product(x, y)?, 1),
                        &engine.oracle_product(&sx, &sy)?,
                    ),
                ])
            })
            .collect(),
    )?;
    report.absorb(outcomes.into_iter().flatten().collect());
    Ok(report)
}

fn fn_string(f: &crate::homotopy::FnFinSupp) -> String {
    let parts: Vec<String> = f.support().map(|(c, v)| format!("{c}:{}", fraction_string(v))).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Functoriality of `f_!`, base change on product squares, and agreement of
/// the two pushforward formulas on projections, each on `samples` seeded
/// random instances with at most 4 components and orders in `1..=4`.
pub fn homotopy(opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::new(Suite::Homotopy);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut outcomes = Vec::new();
    let ty = |rng: &mut ChaCha8Rng| gen::lf_type(rng, 4, 3, 4);
    for i in 0..opts.samples {
        let (x, y, z) = (ty(&mut rng), ty(&mut rng), ty(&mut rng));
        let (f, g) = (gen::lf_map(&mut rng, &x, &y), gen::lf_map(&mut rng, &y, &z));
        let alpha = gen::function(&mut rng, &x);
        let lhs = pushforward_l1(&f.then(&g)?, &alpha)?;
        let rhs = pushforward_l1(&g, &pushforward_l1(&f, &alpha)?)?;
        outcomes.push(Outcome {
            compared: z.component_count(),
            failure: (lhs != rhs).then(|| {
                format!("functoriality #{i}: (g∘f)_! α = {} but g_! f_! α = {}", fn_string(&lhs), fn_string(&rhs))
            }),
        });
    }
    for i in 0..opts.samples {
        let (fiber, base, base2) = (ty(&mut rng), ty(&mut rng), ty(&mut rng));
        let u = gen::lf_map(&mut rng, &base2, &base);
        let f = LFMap::projection(&fiber, &base);
        let f2 = LFMap::projection(&fiber, &base2);
        let u2 = LFMap::product_with(&fiber, &u);
        let alpha = gen::function(&mut rng, f.source());
        let lhs = pullback(&u, &pushforward_l1(&f, &alpha)?)?;
        let rhs = pushforward_l1(&f2, &pullback(&u2, &alpha)?)?;
        outcomes.push(Outcome {
            compared: base2.component_count(),
            failure: (lhs != rhs).then(|| {
                format!("base change #{i}: u^* f_! α = {} but f'_! u'^* α = {}", fn_string(&lhs), fn_string(&rhs))
            }),
        });
    }
    for i in 0..opts.samples {
        let (fiber, base) = (ty(&mut rng), ty(&mut rng));
        let f = LFMap::projection(&fiber, &base);
        let fp = FiberPresentation::of_projection(&fiber, &base);
        let alpha = gen::function(&mut rng, f.source());
        let lhs = pushforward_l1(&f, &alpha)?;
        let rhs = pushforward_fibers(&fp, &alpha)?;
        outcomes.push(Outcome {
            compared: base.component_count(),
            failure: (lhs != rhs).then(|| {
                format!("fiber formula #{i}: groups give {} but fibers give {}", fn_string(&lhs), fn_string(&rhs))
            }),
        });
    }
    // Linearity of f_! and f^* on one more batch.
    for i in 0..opts.samples {
        let (x, y) = (ty(&mut rng), ty(&mut rng));
        let f = gen::lf_map(&mut rng, &x, &y);
        let (a, b) = (gen::function(&mut rng, &x), gen::function(&mut rng, &y));
        let s = BigRational::new(BigInt::from(rng.gen_range(-5..=5)), BigInt::from(rng.gen_range(1..=3)));
        let push_ok = pushforward_l1(&f, &a.scale(&s).add(&a)?)? == pushforward_l1(&f, &a)?.scale(&s).add(&pushforward_l1(&f, &a)?)?;
        let pull_ok = pullback(&f, &b.scale(&s))? == pullback(&f, &b)?.scale(&s);
        outcomes.push(Outcome {
            compared: 2,
            failure: (!(push_ok && pull_ok)).then(|| format!("linearity #{i} fails for scale {s}")),
        });
    }
    report.absorb(outcomes);
    report.notes.push(format!("seed {}, {} instances per identity", opts.seed, opts.samples));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heart::Heart;
    use std::sync::Arc;

    fn engine(n: usize) -> DerivedHall {
        DerivedHall::new(Arc::new(Heart::linear_a(n, 2).unwrap()))
    }

    #[test]
    fn suites_pass_on_a1() {
        let e = engine(1);
        let opts = VerifyOptions {
            samples: 50,
            ..VerifyOptions::default()
        };
        for suite in Suite::ALL {
            let r = run(&e, suite, &opts).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.instances > 0, "{r}");
        }
    }

    #[test]
    fn heart_assoc_a2() {
        let e = engine(2);
        let opts = VerifyOptions {
            max_dim: 3,
            degrees: 0..=0,
            ..VerifyOptions::default()
        };
        let r = assoc(&e, &opts).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn report_lists_counterexamples() {
        let e = engine(1);
        let x = GradedObject::heart(IsoClass::indecomposable(0));
        let o = compare(&e, "probe".into(), &HallElement::basis(x.clone()), &HallElement::basis(x.shift(1)));
        let mut r = Report::new(Suite::Unit);
        r.absorb(vec![o]);
        assert!(!r.passed());
        let text = r.to_string();
        assert!(text.contains("FAIL") && text.contains("probe: (1/1)·S1[0] ≠ (1/1)·S1[1]"), "{text}");
    }
}
