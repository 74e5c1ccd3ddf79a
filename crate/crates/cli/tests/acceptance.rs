//! Acceptance checks, one line per criterion. Runs with `harness = false`
//! and exits nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stirmod_core::binomial::kummer_valuation;
use stirmod_core::chern::{chern_valuation_regular, verify_chern_vanishing};
use stirmod_core::modring::{
    check_cyclotomic_vanishing, check_root_factorization, element_of_order_p_minus_1, factorize,
    vp, Modulus, PrimePower,
};
use stirmod_core::polyring::{
    closed_form_even, closed_form_even_additive, closed_form_odd, pochhammer_poly, verify_pt_lemma,
    verify_q_homogenization, verify_shift_identity, verify_weak_even_lemma, DensePoly,
};
use stirmod_core::stirling::{
    big_mod, stirling_exact, stirling_mod_pr, stirling_valuation, ValuationKind,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn pp(p: u64, r: u32) -> PrimePower {
    PrimePower::new(p, r).expect("valid prime power")
}

/// Valuation by repeated division; `None` for zero.
fn valuation(x: &BigUint, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigUint::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    Some(v)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_row() -> Outcome {
    let expected = [1u64, 28, 322, 1960, 6769, 13132, 13068, 5040];
    for n in [13_133u64, 1 << 20, 1 << 62] {
        let p = pochhammer_poly(8, Modulus::new(n).unwrap());
        ensure(p.coefficients() == expected, || {
            format!("mod {n}: got {:?}", p.coefficients())
        })?;
    }
    Ok("P_8 = [1, 28, 322, 1960, 6769, 13132, 13068, 5040] for N = 13133, 2^20, 2^62".into())
}

fn residue_sweep() -> Outcome {
    let mut cases = 0u64;
    for n in 2..=400u64 {
        for (p, r) in factorize(n) {
            let m = pp(p, r).modulus();
            for k in 0..=n as i64 {
                let s = stirling_mod_pr(n, k, p).map_err(|e| e.to_string())?;
                let exact = big_mod(&stirling_exact(n, k).map_err(|e| e.to_string())?, m);
                ensure(s.value == exact, || {
                    format!("c({n},{k}) mod {}: {} vs {}", m.get(), s.value, exact)
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, n <= 400"))
}

fn odd_identity() -> Outcome {
    let set = [
        (3, 1),
        (3, 2),
        (3, 3),
        (3, 4),
        (3, 5),
        (5, 1),
        (5, 2),
        (5, 3),
        (7, 1),
        (7, 2),
        (7, 3),
        (11, 1),
        (13, 1),
    ];
    for (p, r) in set {
        let q = pp(p, r);
        let actual = pochhammer_poly(q.value(), q.modulus());
        let expected = closed_form_odd(q, 1).map_err(|e| e.to_string())?;
        ensure(actual == expected, || format!("p^r = {}", q.value()))?;
    }
    Ok(format!("{} prime powers", set.len()))
}

fn even_identity() -> Outcome {
    for r in 3..=12u32 {
        let n = 1u64 << r;
        let actual = pochhammer_poly(n, pp(2, r).modulus());
        let additive = closed_form_even_additive(r).map_err(|e| e.to_string())?;
        let product = closed_form_even(n).map_err(|e| e.to_string())?;
        ensure(actual == additive, || format!("additive form, r = {r}"))?;
        ensure(actual == product, || format!("product form, r = {r}"))?;
    }
    let m2 = Modulus::new(2).unwrap();
    ensure(
        pochhammer_poly(2, m2) == DensePoly::new(m2, vec![1, 1]),
        || "P_2".into(),
    )?;
    let m4 = Modulus::new(4).unwrap();
    let p4 = DensePoly::from_signed(m4, &[1, 2])
        .mul(&DensePoly::from_signed(m4, &[1, 0, -1]))
        .unwrap();
    ensure(pochhammer_poly(4, m4) == p4, || "P_4".into())?;
    Ok("r = 3..12 both forms; P_2 and P_4".into())
}

const LEMMA_SET: [(u64, u32); 11] = [
    (3, 1),
    (3, 2),
    (3, 3),
    (3, 4),
    (5, 1),
    (5, 2),
    (5, 3),
    (7, 1),
    (7, 2),
    (11, 1),
    (13, 1),
];

fn scaled_product() -> Outcome {
    for (p, r) in LEMMA_SET {
        ensure(verify_pt_lemma(pp(p, r)) == Ok(true), || {
            format!("p={p} r={r}")
        })?;
    }
    Ok(format!("{} prime powers", LEMMA_SET.len()))
}

fn root_factorization() -> Outcome {
    let mut pairs = 0usize;
    for (p, r) in LEMMA_SET {
        let q = pp(p, r);
        let w = element_of_order_p_minus_1(q).map_err(|e| e.to_string())?;
        ensure(check_cyclotomic_vanishing(w, p - 1), || {
            format!("Phi_(p-1)(w) != 0 for p^r = {}", q.value())
        })?;
        let n = q.value();
        let m = q.modulus();
        let list: Vec<(u64, u64)> = if n <= 81 {
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n);
            (0..10_000)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        };
        for &(a, b) in &list {
            let f = check_root_factorization(m.residue(a), m.residue(b), w, p - 1)
                .map_err(|e| e.to_string())?;
            ensure(f.holds, || format!("p^r = {n}, a = {a}, b = {b}"))?;
        }
        pairs += list.len();
    }
    Ok(format!(
        "{pairs} pairs over {} prime powers",
        LEMMA_SET.len()
    ))
}

fn z12_regression() -> Outcome {
    let m = Modulus::new(12).unwrap();
    let f = check_root_factorization(m.residue(11), m.residue(7), m.residue(7), 2)
        .map_err(|e| e.to_string())?;
    ensure(!f.holds && f.lhs.value() == 0 && f.rhs.value() == 4, || {
        format!("holds={} lhs={} rhs={}", f.holds, f.lhs, f.rhs)
    })?;
    Ok("Z/12: holds=false lhs=0 rhs=4".into())
}

fn valuations() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        let mut r = if p == 2 { 3 } else { 1 };
        while p.pow(r) <= 512 {
            let q = pp(p, r);
            let n = q.value();
            for k in 1..=n as i64 {
                let claim = stirling_valuation(q, k).map_err(|e| e.to_string())?;
                let actual = valuation(&stirling_exact(n, k).unwrap(), p);
                let ok = match claim.kind {
                    ValuationKind::Exact => actual == Some(claim.value),
                    ValuationKind::AtLeastR => actual.is_none_or(|v| v >= r),
                };
                ensure(ok, || {
                    format!("c({n},{k}): predicted {claim}, oracle {actual:?}")
                })?;
                checked += 1;
            }
            r += 1;
        }
    }
    // at p = 2 the exceptional l in {0, 2^(r-2)} (odd n - k) give r - 1
    for r in 3..=9u32 {
        let n = 1u64 << r;
        for l in [0, 1u64 << (r - 2)] {
            let k = (n - 2 * l - 1) as i64;
            let v = valuation(&stirling_exact(n, k).unwrap(), 2);
            ensure(v == Some(r - 1), || format!("c({n},{k}) has v_2 {v:?}"))?;
        }
    }
    Ok(format!("{checked} values, p^r <= 512"))
}

fn kummer() -> Outcome {
    let mut row = vec![BigUint::one()];
    let mut checked = 0;
    for m in 0..=300u64 {
        if m > 0 {
            let mut next = vec![BigUint::one(); m as usize + 1];
            for k in 1..m as usize {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
        for p in [2u64, 3, 5, 7, 11] {
            for (k, c) in row.iter().enumerate() {
                let got = kummer_valuation(m, k as i64, p).map_err(|e| e.to_string())?;
                ensure(Some(got) == valuation(c, p), || format!("v_{p} C({m},{k})"))?;
                checked += 1;
            }
        }
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let mut r = 1;
        while p.pow(r) <= 1024 {
            let n = p.pow(r);
            for k in 1..=n {
                let got = kummer_valuation(n, k as i64, p).map_err(|e| e.to_string())?;
                ensure(got == r - vp(k, p).unwrap(), || {
                    format!("C({n},{k}) at p={p}")
                })?;
            }
            r += 1;
        }
    }
    Ok(format!(
        "{checked} binomials against Pascal's triangle; prime powers <= 1024"
    ))
}

fn even_congruences() -> Outcome {
    for r in 2..=12 {
        ensure(verify_weak_even_lemma(r) == Ok(true), || {
            format!("weak form, r = {r}")
        })?;
        ensure(verify_shift_identity(r) == Ok(true), || {
            format!("shift identity, r = {r}")
        })?;
    }
    Ok("r = 2..12".into())
}

fn homogenization() -> Outcome {
    let set = [
        (3, 1),
        (3, 2),
        (3, 3),
        (3, 4),
        (5, 1),
        (5, 2),
        (5, 3),
        (7, 1),
        (7, 2),
    ];
    for (p, r) in set {
        ensure(verify_q_homogenization(pp(p, r)) == Ok(true), || {
            format!("p={p} r={r}")
        })?;
    }
    Ok(format!("{} prime powers", set.len()))
}

fn chern_classes() -> Outcome {
    let mut failures = Vec::new();
    for (p, r) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2)] {
        let q = pp(p, r);
        let rep = verify_chern_vanishing(q).map_err(|e| e.to_string())?;
        if !rep.orbits_vanish() {
            return Err(format!(
                "p^r = {}: orbits {:?} have classes",
                q.value(),
                rep.orbit_failures
            ));
        }
        if !rep.regular_pattern_holds() {
            let degree = q.value() - q.value() / p;
            failures.push(format!(
                "p^r={}: c_k = 0 for k={:?} although p-1 | k ({}all beyond deg P = {degree})",
                q.value(),
                rep.regular_failures,
                if rep.failures_explained_by_degree() {
                    ""
                } else {
                    "not "
                },
            ));
        }
    }
    let mut checked = 0;
    for p in [3u64, 5, 7, 11, 13, 17] {
        let mut r = 1;
        while p.pow(r) <= 343 {
            let q = pp(p, r);
            let n = q.value();
            for k in 1..=n {
                let claim = chern_valuation_regular(q, k).map_err(|e| e.to_string())?;
                let a = big_mod(&stirling_exact(n, (n - k) as i64).unwrap(), q.modulus());
                let actual = if a.is_zero() {
                    None
                } else {
                    vp(a.value(), p).ok()
                };
                ensure(
                    claim.zero == actual.is_none() && claim.valuation == actual,
                    || format!("p^r = {n}, k = {k}: predicted {claim:?}, oracle {actual:?}"),
                )?;
                checked += 1;
            }
            r += 1;
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "vanishing pattern holds; e = r-1-v_p(l) matches {checked} classes"
        ))
    } else {
        Err(format!(
            "regular pattern is false for r >= 2: {}. Orbit vanishing holds and e = r-1-v_p(l) matches all {checked} classes",
            failures.join("; ")
        ))
    }
}

fn workspace_manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../Cargo.toml")
}

fn corrupt_binary() -> Result<PathBuf, String> {
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).join("corrupt-build");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "--quiet", "-p", "stirmod-cli", "--bin", "stirmod"])
        .args(["--features", "corrupt-branch", "--manifest-path"])
        .arg(workspace_manifest())
        .arg("--target-dir")
        .arg(&target)
        .status()
        .map_err(|e| format!("cannot run cargo: {e}"))?;
    ensure(status.success(), || {
        format!("corrupt build failed: {status}")
    })?;
    Ok(target
        .join("debug")
        .join(format!("stirmod{}", std::env::consts::EXE_SUFFIX)))
}

fn exit_code(bin: &Path, args: &[&str]) -> Result<i32, String> {
    let out = Command::new(bin)
        .args(args)
        .output()
        .map_err(|e| format!("cannot run {}: {e}", bin.display()))?;
    out.status.code().ok_or_else(|| "killed by signal".into())
}

fn cli_contract() -> Outcome {
    let normal = PathBuf::from(env!("CARGO_BIN_EXE_stirmod"));
    let corrupt = corrupt_binary()?;
    let codes = [
        ("verify all", exit_code(&normal, &["verify", "all"])?),
        (
            "corrupt verify all",
            exit_code(&corrupt, &["verify", "all"])?,
        ),
        ("verify thm1.1", exit_code(&normal, &["verify", "thm1.1"])?),
        (
            "corrupt verify thm1.1",
            exit_code(&corrupt, &["verify", "thm1.1"])?,
        ),
    ];
    let summary = codes
        .iter()
        .map(|(name, c)| format!("{name} -> {c}"))
        .collect::<Vec<_>>()
        .join(", ");
    let expected = [0, 1, 0, 1];
    if codes.iter().map(|c| c.1).eq(expected) {
        Ok(summary)
    } else if codes[0].1 == 1 && codes[1..].iter().map(|c| c.1).eq([1, 0, 1]) {
        Err(format!(
            "{summary}. The unmodified build fails only the thm1.4 regular-pattern cases (see criterion 12); the mutation is caught"
        ))
    } else {
        Err(summary)
    }
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("P_8 golden row", golden_row),
        ("closed-form residues vs oracle, n <= 400", residue_sweep),
        ("odd prime power product identity", odd_identity),
        ("power of two product identities", even_identity),
        ("P(pt) = 1 mod p^(r+1)", scaled_product),
        ("cyclotomic root and root factorization", root_factorization),
        ("Z/12 counterexample", z12_regression),
        ("valuations of c(p^r, k) vs oracle", valuations),
        ("Kummer carries", kummer),
        ("weak even congruence and shift identity", even_congruences),
        ("homogenized product", homogenization),
        ("Chern classes of C_(p^r)", chern_classes),
        ("CLI exit codes and mutation check", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
