//! Verification suites. Each suite expands into independent cases that
//! can run on any number of threads; results are reported in case order.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use stirmod_core::chern::{chern_valuation_regular, verify_chern_vanishing};
use stirmod_core::modring::{
    check_cyclotomic_vanishing, check_poly_root_factorization, check_root_factorization,
    element_of_order_p_minus_1, factorize, is_prime, Modulus, PrimePower,
};
use stirmod_core::polyring::{
    closed_form_even, closed_form_even_additive, closed_form_odd, first_mismatch, pochhammer_poly,
    verify_pt_lemma, verify_q_homogenization, verify_shift_identity, verify_weak_even_lemma,
    DensePoly,
};
use stirmod_core::stirling::{
    big_mod, big_valuation, stirling_exact, stirling_mod_pr, stirling_valuation, ValuationKind,
};

use crate::report::{CaseResult, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    StirlingResidues,
    OddValuations,
    EvenValuations,
    OddProduct,
    EvenProduct,
    ScaledProduct,
    RootFactorization,
    RootFactorizationCounterexample,
    CyclotomicRoot,
    WeakEvenProduct,
    ShiftIdentity,
    Homogenization,
    ChernVanishing,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::StirlingResidues,
        Suite::OddValuations,
        Suite::EvenValuations,
        Suite::OddProduct,
        Suite::EvenProduct,
        Suite::ScaledProduct,
        Suite::RootFactorization,
        Suite::RootFactorizationCounterexample,
        Suite::CyclotomicRoot,
        Suite::WeakEvenProduct,
        Suite::ShiftIdentity,
        Suite::Homogenization,
        Suite::ChernVanishing,
    ];

    /// Name accepted on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Suite::StirlingResidues => "thm1.1",
            Suite::OddValuations => "cor1.2",
            Suite::EvenValuations => "cor1.3",
            Suite::OddProduct => "thm2.1",
            Suite::EvenProduct => "thm2.3",
            Suite::ScaledProduct => "lemma3.1",
            Suite::RootFactorization => "lemma3.2",
            Suite::RootFactorizationCounterexample => "remark3.3",
            Suite::CyclotomicRoot => "cor4.4",
            Suite::WeakEvenProduct => "lemma5.1",
            Suite::ShiftIdentity => "lemma5.2",
            Suite::Homogenization => "q-homog",
            Suite::ChernVanishing => "thm1.4",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Suite::StirlingResidues => "c(n,k) mod p^v_p(n) by closed forms",
            Suite::OddValuations => "v_p(c(p^r,k)), p odd",
            Suite::EvenValuations => "v_2(c(2^r,k)), r >= 3",
            Suite::OddProduct => "P_{p^r}(t) = (1-t^(p-1))^(p^(r-1)) mod p^r",
            Suite::EvenProduct => "P_{2^r}(t) closed forms mod 2^r",
            Suite::ScaledProduct => "P_{p^r}(pt) = 1 mod p^(r+1)",
            Suite::RootFactorization => "a^(p-1) - b^(p-1) = prod (a - w^i b) in Z/p^r",
            Suite::RootFactorizationCounterexample => "root factorization can fail",
            Suite::CyclotomicRoot => "Phi_(p-1)(w) = 0 in Z/p^r",
            Suite::WeakEvenProduct => "P_{2^r}(t) = (1-t^2)^(2^(r-2)) mod 2^(r-1)",
            Suite::ShiftIdentity => {
                "P_{2^r}(t) = P_{2^(r-1)}(t) P_{2^(r-1)}(-t) (1-2^(r-1)t) mod 2^r"
            }
            Suite::Homogenization => "Q_{p^r}(X,pY) = X^(p^r) mod p^(r+1)",
            Suite::ChernVanishing => "Chern classes of permutation representations of C_(p^r)",
        }
    }

    /// Largest `n` (or prime power) the suite touches by default.
    pub fn default_max_n(self) -> u64 {
        match self {
            Suite::StirlingResidues => 400,
            Suite::OddValuations | Suite::EvenValuations => 512,
            Suite::OddProduct => 343,
            Suite::EvenProduct | Suite::WeakEvenProduct | Suite::ShiftIdentity => 4096,
            Suite::ScaledProduct | Suite::RootFactorization => 125,
            Suite::RootFactorizationCounterexample => 12,
            Suite::CyclotomicRoot => 10_000,
            Suite::Homogenization => 343,
            Suite::ChernVanishing => 343,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A suite name or `all`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    One(Suite),
    All,
}

impl Selection {
    pub fn suites(&self) -> Vec<Suite> {
        match self {
            Selection::One(s) => vec![*s],
            Selection::All => Suite::ALL.to_vec(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Selection::One(s) => s.name(),
            Selection::All => "all",
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Suite::ALL
            .iter()
            .find(|suite| suite.name() == s)
            .map(|&suite| Selection::One(suite))
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!(
                    "unknown suite '{s}'; expected one of {}, all",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub max_n: Option<u64>,
    pub jobs: Option<usize>,
}

type Check = Box<dyn Fn() -> (bool, String) + Send + Sync>;

struct Case {
    suite: Suite,
    id: String,
    check: Check,
}

fn case(
    suite: Suite,
    id: String,
    check: impl Fn() -> (bool, String) + Send + Sync + 'static,
) -> Case {
    Case {
        suite,
        id,
        check: Box::new(check),
    }
}

/// Prime powers `p^r <= max` for the listed primes, ascending by `p` then `r`.
fn prime_powers(primes: &[u64], max: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for &p in primes {
        let mut r = 1;
        while let Ok(pp) = PrimePower::new(p, r) {
            if pp.value() > max {
                break;
            }
            out.push(pp);
            r += 1;
        }
    }
    out
}

const SMALL_ODD_PRIMES: [u64; 3] = [3, 5, 7];
const ODD_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

fn cases_for(suite: Suite, max: u64) -> Vec<Case> {
    match suite {
        Suite::StirlingResidues => stirling_residue_cases(max),
        Suite::OddValuations => prime_powers(&SMALL_ODD_PRIMES, max)
            .into_iter()
            .map(|pp| {
                case(suite, format!("p={},r={}", pp.p(), pp.r()), move || {
                    valuation_check(pp)
                })
            })
            .collect(),
        Suite::EvenValuations => prime_powers(&[2], max)
            .into_iter()
            .filter(|pp| pp.r() >= 3)
            .map(|pp| case(suite, format!("r={}", pp.r()), move || valuation_check(pp)))
            .collect(),
        Suite::OddProduct => prime_powers(&SMALL_ODD_PRIMES, max)
            .into_iter()
            .map(|pp| {
                case(suite, format!("p={},r={}", pp.p(), pp.r()), move || {
                    let actual = pochhammer_poly(pp.value(), pp.modulus());
                    let expected = closed_form_odd(pp, 1).expect("odd prime");
                    poly_outcome(&actual, &expected)
                })
            })
            .collect(),
        Suite::EvenProduct => even_product_cases(max),
        Suite::ScaledProduct => prime_powers(&ODD_PRIMES, max)
            .into_iter()
            .map(|pp| {
                case(suite, format!("p={},r={}", pp.p(), pp.r()), move || {
                    bool_outcome(verify_pt_lemma(pp), "P(pt) reduces to 1")
                })
            })
            .collect(),
        Suite::RootFactorization => prime_powers(&ODD_PRIMES, max)
            .into_iter()
            .map(|pp| {
                case(suite, format!("p={},r={}", pp.p(), pp.r()), move || {
                    root_factorization_check(pp)
                })
            })
            .collect(),
        Suite::RootFactorizationCounterexample => vec![case(suite, "z12".into(), || {
            let m = Modulus::new(12).expect("valid modulus");
            let (a, b, w) = (m.residue_signed(-1), m.residue(7), m.residue(7));
            match check_root_factorization(a, b, w, 2) {
                Ok(f) => (
                    !f.holds && f.lhs.value() == 0 && f.rhs.value() == 4,
                    format!(
                        "Z/12: lhs={} rhs={} identity {}",
                        f.lhs.value(),
                        f.rhs.value(),
                        if f.holds {
                            "holds unexpectedly"
                        } else {
                            "fails as expected"
                        }
                    ),
                ),
                Err(e) => (false, e.to_string()),
            }
        })],
        Suite::CyclotomicRoot => {
            let primes: Vec<u64> = (3..=97).filter(|&p| is_prime(p)).collect();
            prime_powers(&primes, max)
                .into_iter()
                .map(|pp| {
                    case(suite, format!("p={},r={}", pp.p(), pp.r()), move || {
                        match element_of_order_p_minus_1(pp) {
                            Ok(w) => (
                                check_cyclotomic_vanishing(w, pp.p() - 1),
                                format!("w={} mod {}", w.value(), pp.value()),
                            ),
                            Err(e) => (false, e.to_string()),
                        }
                    })
                })
                .collect()
        }
        Suite::WeakEvenProduct => prime_powers(&[2], max)
            .into_iter()
            .filter(|pp| pp.r() >= 2)
            .map(|pp| {
                let r = pp.r();
                case(suite, format!("r={r}"), move || {
                    bool_outcome(verify_weak_even_lemma(r), "congruence holds mod 2^(r-1)")
                })
            })
            .collect(),
        Suite::ShiftIdentity => prime_powers(&[2], max)
            .into_iter()
            .filter(|pp| pp.r() >= 2)
            .map(|pp| {
                let r = pp.r();
                case(suite, format!("r={r}"), move || {
                    bool_outcome(verify_shift_identity(r), "both sides agree mod 2^r")
                })
            })
            .collect(),
        Suite::Homogenization => prime_powers(&SMALL_ODD_PRIMES, max)
            .into_iter()
            .map(|pp| {
                case(suite, format!("p={},r={}", pp.p(), pp.r()), move || {
                    bool_outcome(
                        verify_q_homogenization(pp),
                        "every Y-degree term divisible by p^(r+1)",
                    )
                })
            })
            .collect(),
        Suite::ChernVanishing => chern_cases(max),
    }
}

fn bool_outcome(r: stirmod_core::Result<bool>, ok: &str) -> (bool, String) {
    match r {
        Ok(true) => (true, ok.to_string()),
        Ok(false) => (false, "identity fails".to_string()),
        Err(e) => (false, e.to_string()),
    }
}

fn poly_outcome(actual: &DensePoly, expected: &DensePoly) -> (bool, String) {
    match first_mismatch(actual, expected) {
        None => (
            true,
            format!("{} coefficients agree", actual.coefficients().len()),
        ),
        Some(m) => (
            false,
            format!(
                "t^{}: P has {}, closed form has {}",
                m.degree, m.actual, m.expected
            ),
        ),
    }
}

fn stirling_residue_cases(max: u64) -> Vec<Case> {
    let suite = Suite::StirlingResidues;
    let mut cases = Vec::new();
    for n in 2..=max {
        for (p, r) in factorize(n) {
            cases.push(case(suite, format!("n={n},p={p}"), move || {
                let pp = PrimePower::new(p, r).expect("factor");
                for k in 0..=n as i64 {
                    let got = match stirling_mod_pr(n, k, p) {
                        Ok(s) => s,
                        Err(e) => return (false, e.to_string()),
                    };
                    let exact = match stirling_exact(n, k) {
                        Ok(c) => big_mod(&c, pp.modulus()),
                        Err(e) => return (false, e.to_string()),
                    };
                    if got.value != exact {
                        return (
                            false,
                            format!(
                                "k={k} [{}]: closed form {} but c(n,k) = {} mod {}",
                                got.branch,
                                got.value.value(),
                                exact.value(),
                                pp.value()
                            ),
                        );
                    }
                }
                let actual = pochhammer_poly(n, pp.modulus());
                let expected = if p == 2 {
                    closed_form_even(n)
                } else {
                    closed_form_odd(pp, n / pp.value())
                };
                match expected {
                    Ok(expected) => match first_mismatch(&actual, &expected) {
                        None => (
                            true,
                            format!("{} residues and P_n mod {} agree", n + 1, pp.value()),
                        ),
                        Some(m) => (false, format!("P_n differs at t^{}", m.degree)),
                    },
                    Err(e) => (false, e.to_string()),
                }
            }));
        }
    }
    cases
}

fn valuation_check(pp: PrimePower) -> (bool, String) {
    let n = pp.value();
    let mut exact_count = 0;
    for k in 1..=n as i64 {
        let claim = match stirling_valuation(pp, k) {
            Ok(v) => v,
            Err(e) => return (false, e.to_string()),
        };
        let c = match stirling_exact(n, k) {
            Ok(c) => c,
            Err(e) => return (false, e.to_string()),
        };
        let actual = big_valuation(&c, pp.p());
        let ok = match claim.kind {
            ValuationKind::Exact => {
                exact_count += 1;
                actual == Some(claim.value)
            }
            ValuationKind::AtLeastR => actual.is_none_or(|v| v >= claim.value),
        };
        if !ok {
            return (
                false,
                format!("k={k}: predicted v {claim}, oracle {actual:?}"),
            );
        }
    }
    (true, format!("{n} values, {exact_count} exact"))
}

fn even_product_cases(max: u64) -> Vec<Case> {
    let suite = Suite::EvenProduct;
    let mut cases = Vec::new();
    for n in [2u64, 4] {
        if n <= max {
            cases.push(case(suite, format!("n={n}"), move || {
                let m = Modulus::new(n).expect("valid");
                let expected = if n == 2 {
                    DensePoly::new(m, vec![1, 1])
                } else {
                    DensePoly::from_signed(m, &[1, 2, -1, -2])
                };
                poly_outcome(&pochhammer_poly(n, m), &expected)
            }));
        }
    }
    for pp in prime_powers(&[2], max).into_iter().filter(|pp| pp.r() >= 3) {
        let r = pp.r();
        cases.push(case(suite, format!("r={r}"), move || {
            let actual = pochhammer_poly(pp.value(), pp.modulus());
            let additive = closed_form_even_additive(r).expect("r >= 3");
            let product = closed_form_even(pp.value()).expect("even");
            let (ok_a, detail_a) = poly_outcome(&actual, &additive);
            let (ok_p, detail_p) = poly_outcome(&actual, &product);
            (
                ok_a && ok_p,
                format!("additive: {detail_a}; product: {detail_p}"),
            )
        }));
    }
    cases
}

const EXHAUSTIVE_PAIRS_MAX: u64 = 81;
const RANDOM_PAIRS: usize = 10_000;

fn root_factorization_check(pp: PrimePower) -> (bool, String) {
    let w = match element_of_order_p_minus_1(pp) {
        Ok(w) => w,
        Err(e) => return (false, e.to_string()),
    };
    let m = pp.modulus();
    let q = pp.value();
    let n = pp.p() - 1;
    let pairs: Vec<(u64, u64)> = if q <= EXHAUSTIVE_PAIRS_MAX {
        (0..q).flat_map(|a| (0..q).map(move |b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        (0..RANDOM_PAIRS)
            .map(|_| (rng.gen_range(0..q), rng.gen_range(0..q)))
            .collect()
    };
    for &(a, b) in &pairs {
        match check_root_factorization(m.residue(a), m.residue(b), w, n) {
            Ok(f) if f.holds => {}
            Ok(f) => {
                return (
                    false,
                    format!("a={a} b={b}: lhs={} rhs={}", f.lhs.value(), f.rhs.value()),
                )
            }
            Err(e) => return (false, e.to_string()),
        }
    }
    if !check_poly_root_factorization(w, pp) {
        return (false, "polynomial form fails".into());
    }
    (
        true,
        format!(
            "w={}, {} pairs and polynomial form hold",
            w.value(),
            pairs.len()
        ),
    )
}

fn chern_cases(max: u64) -> Vec<Case> {
    let suite = Suite::ChernVanishing;
    let mut cases = Vec::new();
    for pp in prime_powers(&SMALL_ODD_PRIMES, max) {
        cases.push(case(suite, format!("p={},r={},vanishing", pp.p(), pp.r()), move || {
            match verify_chern_vanishing(pp) {
                Ok(rep) => {
                    let mut detail = if rep.regular_pattern_holds() {
                        "regular: c_k != 0 iff p-1 | k".to_string()
                    } else {
                        format!(
                            "regular: pattern fails at k={:?} ({} above degree {} of the closed form)",
                            rep.regular_failures,
                            if rep.failures_explained_by_degree() { "all" } else { "not all" },
                            pp.value() - pp.value() / pp.p()
                        )
                    };
                    if rep.orbits_vanish() {
                        detail.push_str("; non-free orbits: all classes vanish");
                    } else {
                        detail.push_str(&format!("; orbits with nonzero classes: {:?}", rep.orbit_failures));
                    }
                    (rep.passed(), detail)
                }
                Err(e) => (false, e.to_string()),
            }
        }));
        cases.push(case(
            suite,
            format!("p={},r={},valuation", pp.p(), pp.r()),
            move || {
                let n = pp.value();
                for k in 1..=n {
                    let claim = match chern_valuation_regular(pp, k) {
                        Ok(c) => c,
                        Err(e) => return (false, e.to_string()),
                    };
                    let actual = match stirling_exact(n, (n - k) as i64) {
                        Ok(c) => big_valuation(&c, pp.p()).filter(|&v| v < pp.r()),
                        Err(e) => return (false, e.to_string()),
                    };
                    if claim.valuation != actual {
                        return (
                            false,
                            format!(
                                "k={k}: predicted {:?}, oracle {:?}",
                                claim.valuation, actual
                            ),
                        );
                    }
                }
                (true, format!("e = r-1-v_p(l) matches for all {n} classes"))
            },
        ));
    }
    cases
}

/// Run the selected suites.
pub fn run(selection: &Selection, opts: RunOptions) -> VerificationReport {
    let start = Instant::now();
    let cases: Vec<Case> = selection
        .suites()
        .into_iter()
        .flat_map(|s| cases_for(s, opts.max_n.unwrap_or_else(|| s.default_max_n())))
        .collect();

    let exec = |c: &Case| {
        let (pass, detail) = (c.check)();
        CaseResult {
            suite: c.suite.name().to_string(),
            case: c.id.clone(),
            statement: c.suite.statement().to_string(),
            pass,
            detail,
        }
    };
    let results: Vec<CaseResult> = match opts.jobs {
        Some(1) => cases.iter().map(exec).collect(),
        jobs => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .expect("thread pool");
            pool.install(|| cases.par_iter().map(exec).collect())
        }
    };
    VerificationReport::new(selection.name(), results, start.elapsed())
}
