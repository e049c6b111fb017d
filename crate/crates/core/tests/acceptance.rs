//! End-to-end acceptance run. One line per criterion; exits nonzero on any failure.
//!
//! Runs without the libtest harness so the per-criterion lines always show.

use mincodes::boolfun::{fwht, BooleanFunction};
use mincodes::codes::{
    ab_from_spectrum_extremes, bound_argument, build_augmented_code, build_code, covering_scan,
    ding_scan, generic_ab_criterion, is_minimal_bruteforce, minimality_walsh_criterion,
    popcount_distribution, sample_ding_triples, table_frequencies, verify_weight_routes,
    weight_distribution, FunctionCode, TableKind, Verdict, WeightDistribution,
};
use mincodes::constructions::{build_family, gold, modified_indicator, FamilySpec, SpreadFamily};
use mincodes::gf2::{dot, FieldContext, Subspace};
use mincodes::vectorial::{Pairing, VectorialFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn family(spec: FamilySpec) -> Result<(VectorialFunction, Pairing), String> {
    let fam = build_family(&spec).map_err(|e| format!("{spec:?}: {e}"))?;
    Ok((fam.function, fam.pairing))
}

fn code_of(f: &VectorialFunction, p: &Pairing) -> Result<FunctionCode, String> {
    build_code(f, p).map_err(|e| e.to_string())
}

/// Walsh-route and popcount-route distributions, required to agree.
fn distribution(code: &FunctionCode) -> Result<WeightDistribution, String> {
    let walsh = weight_distribution(code).map_err(|e| e.to_string())?;
    let pop = popcount_distribution(code.code()).map_err(|e| e.to_string())?;
    ensure!(
        walsh == pop,
        "walsh route {} != popcount route {}",
        walsh.enumerator(),
        pop.enumerator()
    );
    ensure!(
        walsh.total() == 1u128 << code.code().dimension(),
        "frequencies sum to {}",
        walsh.total()
    );
    Ok(walsh)
}

fn example(spec: FamilySpec, params: &str, enumerator: &str) -> Result<FunctionCode, String> {
    let (f, p) = family(spec)?;
    let code = code_of(&f, &p)?;
    let dist = distribution(&code)?;
    ensure!(
        code.parameters(&dist) == params,
        "parameters {}",
        code.parameters(&dist)
    );
    ensure!(
        dist.enumerator() == enumerator,
        "enumerator {}",
        dist.enumerator()
    );
    Ok(code)
}

fn criterion1() -> Outcome {
    example(
        FamilySpec::VectorialBent {
            n: 6,
            r: 3,
            complemented: false,
        },
        "[63,9,28]",
        "1+252z^28+63z^32+196z^36",
    )?;
    Ok("[63,9,28] 1+252z^28+63z^32+196z^36".into())
}

fn criterion2() -> Outcome {
    example(
        FamilySpec::Gold {
            n: 7,
            i: 1,
            modulus: None,
        },
        "[127,14,56]",
        "1+4572z^56+8255z^64+3556z^72",
    )?;
    Ok("[127,14,56] 1+4572z^56+8255z^64+3556z^72".into())
}

fn criterion3() -> Outcome {
    for i in 0..3 {
        let code = example(
            FamilySpec::Theorem6 {
                n: 6,
                i,
                complemented: false,
            },
            "[63,8,14]",
            "1+z^14+72z^28+49z^30+63z^32+56z^36+14z^38",
        )?;
        let report = is_minimal_bruteforce(code.code()).map_err(|e| e.to_string())?;
        ensure!(
            report.is_minimal(),
            "i = {i}: not minimal {:?}",
            report.witness
        );
        ensure!(report.agreement == Some(true), "i = {i}: scans disagree");
        let dist = weight_distribution(&code).map_err(|e| e.to_string())?;
        let ab = ab_from_spectrum_extremes(&dist, code.function(), code.pairing())
            .map_err(|e| e.to_string())?;
        ensure!(ab.ratio == "14/38", "i = {i}: ratio {}", ab.ratio);
        ensure!(!ab.satisfied && ab.agree, "i = {i}: {ab:?}");
    }
    Ok("i = 0,1,2: [63,8,14], minimal, ratio 14/38".into())
}

/// `F(x) = G(x mod 2^k)` on `n` inputs.
fn pad(g: &VectorialFunction, n: u32) -> VectorialFunction {
    let low = (1u32 << g.n()) - 1;
    VectorialFunction::from_fn(n, g.m(), |x| g.get(x & low)).expect("valid sizes")
}

fn units(m: u32) -> Vec<u32> {
    (0..m).map(|j| 1 << j).collect()
}

/// All vectorial-bent projections `(F, m)` with `F` on `2t` inputs.
fn bent_points(n: u32) -> Result<Vec<VectorialFunction>, String> {
    let t = n / 2;
    let (f, _) = family(FamilySpec::VectorialBent {
        n,
        r: t,
        complemented: false,
    })?;
    (1..=t)
        .map(|m| f.project(&units(m)).map_err(|e| e.to_string()))
        .collect()
}

fn gold_points(n: u32, i: u32) -> Result<Vec<(VectorialFunction, Pairing)>, String> {
    let ctx = FieldContext::with_default_modulus(n).map_err(|e| e.to_string())?;
    let (f, _) = gold(&ctx, i).map_err(|e| e.to_string())?;
    let p = Pairing::FieldTrace(ctx);
    (1..=n)
        .map(|m| Ok((f.project(&units(m)).map_err(|e| e.to_string())?, p.clone())))
        .collect()
}

struct TablePoint {
    label: String,
    kind: TableKind,
    function: VectorialFunction,
    pairing: Pairing,
}

fn table_points() -> Result<Vec<TablePoint>, String> {
    let mut pts = vec![];
    let mut push = |label: String, kind, function: VectorialFunction, pairing: Pairing| {
        pts.push(TablePoint {
            label,
            kind,
            function,
            pairing,
        })
    };
    for n in [6, 8] {
        for f in bent_points(n)? {
            let m = f.m();
            push(
                format!("bent n={n} m={m}"),
                TableKind::Bent,
                f.clone(),
                Pairing::VectorDot,
            );
            push(
                format!("plateaued λ=0 n={n} m={m}"),
                TableKind::Plateaued { lambda: 0 },
                f,
                Pairing::VectorDot,
            );
        }
    }
    for (n, i, lambda) in [(5, 1, 1), (5, 2, 1), (6, 2, 2), (7, 1, 1), (7, 3, 1)] {
        for (f, p) in gold_points(n, i)? {
            let m = f.m();
            push(
                format!("plateaued λ={lambda} n={n} m={m} (gold i={i})"),
                TableKind::Plateaued { lambda },
                f,
                p,
            );
        }
    }
    for k in [4, 6] {
        for g in bent_points(k)? {
            for n in k + 1..=8 {
                let lambda = n - k;
                if lambda > n - 4 {
                    continue;
                }
                push(
                    format!(
                        "plateaued λ={lambda} n={n} m={} (bent on {k} inputs)",
                        g.m()
                    ),
                    TableKind::Plateaued { lambda },
                    pad(&g, n),
                    Pairing::VectorDot,
                );
            }
        }
    }
    for n in [5, 7] {
        for i in 1..n {
            if let Ok((f, p)) = family(FamilySpec::Gold {
                n,
                i,
                modulus: None,
            }) {
                if n % 2 == 1 && gcd(n, i) == 1 {
                    push(format!("ab n={n} i={i}"), TableKind::Ab, f, p);
                }
            }
        }
    }
    for n in [6, 8] {
        for i in 0..n / 2 {
            for complemented in [false, true] {
                let (f, p) = family(FamilySpec::Theorem6 { n, i, complemented })?;
                push(
                    format!("theorem6 n={n} i={i} complemented={complemented}"),
                    TableKind::Theorem6,
                    f,
                    p,
                );
            }
        }
    }
    Ok(pts)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion4() -> Outcome {
    let pts = table_points()?;
    for pt in &pts {
        let (n, m) = (pt.function.n(), pt.function.m());
        let closed = table_frequencies(pt.kind, n, m).map_err(|e| format!("{}: {e}", pt.label))?;
        let code = code_of(&pt.function, &pt.pairing).map_err(|e| format!("{}: {e}", pt.label))?;
        let enumerated = distribution(&code).map_err(|e| format!("{}: {e}", pt.label))?;
        ensure!(
            closed == enumerated,
            "{}: closed {} vs enumerated {}",
            pt.label,
            closed.enumerator(),
            enumerated.enumerator()
        );
        ensure!(
            closed.total() == 1u128 << (n + m),
            "{}: Σ = {}",
            pt.label,
            closed.total()
        );
    }
    Ok(format!("{} parameter points match", pts.len()))
}

fn cross_validation_families() -> Vec<FamilySpec> {
    let mut v = vec![];
    for i in 0..3 {
        v.push(FamilySpec::Theorem6 {
            n: 6,
            i,
            complemented: false,
        });
    }
    for i in 0..4 {
        v.push(FamilySpec::Theorem6 {
            n: 8,
            i,
            complemented: false,
        });
    }
    for r in [2, 3] {
        v.push(FamilySpec::Theorem8 {
            n: 6,
            r,
            a: None,
            b: None,
            complemented: false,
        });
    }
    v.push(FamilySpec::VectorialBent {
        n: 4,
        r: 2,
        complemented: false,
    });
    for r in [2, 3] {
        v.push(FamilySpec::VectorialBent {
            n: 6,
            r,
            complemented: false,
        });
    }
    for (n, i) in [(3, 1), (5, 1), (5, 2), (7, 1)] {
        v.push(FamilySpec::Gold {
            n,
            i,
            modulus: None,
        });
    }
    v
}

fn criterion5() -> Outcome {
    let fams = cross_validation_families();
    let mut non_minimal = 0;
    for spec in &fams {
        let (f, p) = family(spec.clone())?;
        let code = code_of(&f, &p)?;
        let k = code.code().dimension();
        ensure!(k <= 16, "{spec:?}: k = {k}");
        let ding = ding_scan(code.code()).map_err(|e| e.to_string())?;
        let cover = covering_scan(code.code()).map_err(|e| e.to_string())?;
        let walsh = minimality_walsh_criterion(&f, &p).map_err(|e| e.to_string())?;
        ensure!(
            ding == cover,
            "{spec:?}: ding {ding:?} vs covering {cover:?}"
        );
        ensure!(
            ding.is_none() == walsh.is_minimal(),
            "{spec:?}: ding {ding:?} vs walsh {:?}",
            walsh.verdict
        );
        if let Some(w) = &walsh.witness {
            ensure!(
                w.recheck(code.code()),
                "{spec:?}: walsh witness fails recheck"
            );
        }
        if ding.is_some() {
            non_minimal += 1;
        }
    }
    Ok(format!(
        "{} families, verdicts identical ({non_minimal} not minimal)",
        fams.len()
    ))
}

fn criterion6() -> Outcome {
    let (f, p) = family(FamilySpec::Theorem6 {
        n: 6,
        i: 0,
        complemented: false,
    })?;
    let aug = build_augmented_code(&f, &p).map_err(|e| e.to_string())?;
    let report = is_minimal_bruteforce(aug.code()).map_err(|e| e.to_string())?;
    ensure!(
        report.verdict == Verdict::NotMinimal,
        "augmented code reported minimal"
    );
    ensure!(
        report.agreement == Some(true),
        "scans disagree on the augmented code"
    );
    let w = report.witness.as_ref().ok_or("no witness")?;
    ensure!(w.recheck(aug.code()), "witness fails recheck: {w:?}");
    // the constant row covers every codeword
    let k = aug.code().dimension();
    let ones = aug.code().codeword(1 << (k - 1));
    ensure!(
        ones.count_ones() as usize == aug.code().length(),
        "constant row is not all-ones"
    );
    let c = aug.code().codeword(1);
    ensure!(
        aug.code().codeword(1 ^ 1 << (k - 1)).count_ones() == ones.count_ones() - c.count_ones(),
        "all-ones does not cover c(1,0)"
    );

    let spread = SpreadFamily::desarguesian(3).map_err(|e| e.to_string())?;
    let e = spread.subspace(8);
    let dual = e.dual();
    let n = 6;
    let mut fixtures = 0;
    for a in dual.iter().filter(|&v| v != 0) {
        for b in dual.iter().filter(|&v| v != 0 && v != a) {
            let mi = modified_indicator(e, a, b).map_err(|e| e.to_string())?;
            ensure!(
                !mi.condition_holds,
                "a, b ∈ E^⊥ but condition reported holding"
            );
            let wf = naive_walsh(&mi.function);
            ensure!(
                wf[(a ^ b) as usize] - wf[a as usize] == 1 << n,
                "a = {a:#x}, b = {b:#x}: W(a+b) - W(a) = {}",
                wf[(a ^ b) as usize] - wf[a as usize]
            );
            ensure!(
                fwht(&mi.function).values() == &wf[..],
                "fwht disagrees with naive sum"
            );
            fixtures += 1;
        }
    }
    Ok(format!(
        "augmented witness {:#x}/{:#x} rechecked; {fixtures} (a,b) pairs give W(a+b) - W(a) = 2^n",
        w.c1, w.c2
    ))
}

fn naive_walsh(f: &BooleanFunction) -> Vec<i64> {
    let size = 1u32 << f.n();
    (0..size)
        .map(|nu| {
            (0..size)
                .map(|x| if f.get(x) ^ (dot(nu, x) == 1) { -1 } else { 1 })
                .sum()
        })
        .collect()
}

fn criterion7() -> Outcome {
    for r in [2, 3] {
        let (f, p) = family(FamilySpec::Theorem8 {
            n: 6,
            r,
            a: None,
            b: None,
            complemented: false,
        })?;
        let code = code_of(&f, &p)?;
        let dist = distribution(&code)?;
        let want = format!("[63,{},20]", 6 + r + 1);
        ensure!(
            code.parameters(&dist) == want,
            "r = {r}: {}",
            code.parameters(&dist)
        );
        let brute = is_minimal_bruteforce(code.code()).map_err(|e| e.to_string())?;
        ensure!(
            brute.is_minimal() && brute.agreement == Some(true),
            "r = {r}: brute force {brute:?}"
        );
        let generic = generic_ab_criterion(&f, &p).map_err(|e| format!("r = {r}: {e}"))?;
        ensure!(
            generic.minimality.is_minimal(),
            "r = {r}: generic {generic:?}"
        );
        let ab = ab_from_spectrum_extremes(&dist, &f, &p).map_err(|e| e.to_string())?;
        ensure!(!ab.satisfied && ab.agree, "r = {r}: {ab:?}");
    }
    Ok("r = 2,3: [63,9,20] and [63,10,20], minimal by both routes, AB violated".into())
}

fn criterion8() -> Outcome {
    let spec = FamilySpec::Theorem10 {
        n: 10,
        i: 2,
        a: None,
        b: None,
        modulus: None,
    };
    let (f, p) = family(spec)?;
    let code = code_of(&f, &p)?;
    let dist = distribution(&code)?;
    ensure!(
        code.parameters(&dist) == "[1023,21,272]",
        "parameters {}",
        code.parameters(&dist)
    );
    let ctx = FieldContext::with_default_modulus(10).map_err(|e| e.to_string())?;
    let (_, params) = gold(&ctx, 2).map_err(|e| e.to_string())?;
    let e: Subspace = ctx.subfield(5).map_err(|e| e.to_string())?;
    let bound = bound_argument(&f, &p, Some((params, &e))).map_err(|e| e.to_string())?;
    let extras = bound.theorem10.as_ref().ok_or("no theorem10 extras")?;
    ensure!(
        extras.phi_values_ok,
        "φ values {:?} outside {:?}",
        extras.phi_values,
        extras.allowed_values
    );
    for ineq in &bound.inequalities {
        ensure!(ineq.holds, "{} = {} >= 2^n", ineq.expression, ineq.value);
    }
    ensure!(
        bound.minimality.is_minimal(),
        "bound route: {:?}",
        bound.minimality
    );
    let ab = ab_from_spectrum_extremes(&dist, &f, &p).map_err(|e| e.to_string())?;
    ensure!(!ab.satisfied && ab.agree, "{ab:?}");
    let sample = sample_ding_triples(code.code(), 1_000_000, 0);
    ensure!(
        sample.violations == 0,
        "{} sampled violations, first {:?}",
        sample.violations,
        sample.first
    );
    Ok(format!(
        "[1023,21,272], max|W_A| = {}, ratio {}, 10^6 samples clean",
        bound.max_abs_a, ab.ratio
    ))
}

fn random_function(rng: &mut ChaCha8Rng, n: u32) -> BooleanFunction {
    let table: Vec<bool> = (0..1u32 << n).map(|_| rng.gen()).collect();
    BooleanFunction::from_fn(n, |x| table[x as usize])
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=10 {
        for _ in 0..1000 {
            let f = random_function(&mut rng, n);
            let w = fwht(&f);
            ensure!(w.energy() == 1i128 << (2 * n), "Parseval fails at n = {n}");
        }
    }
    for n in 1..=4u32 {
        for bits in 0..1u64 << (1 << n) {
            let f = BooleanFunction::from_fn(n, |x| bits >> x & 1 == 1);
            ensure!(
                fwht(&f).values() == &naive_walsh(&f)[..],
                "fwht != naive, n = {n}"
            );
        }
    }
    for n in 5..=8 {
        for _ in 0..200 {
            let f = random_function(&mut rng, n);
            ensure!(
                fwht(&f).values() == &naive_walsh(&f)[..],
                "fwht != naive, n = {n}"
            );
        }
    }
    for t in 2..=5 {
        let s = SpreadFamily::desarguesian(t).map_err(|e| e.to_string())?;
        let n = 2 * t;
        ensure!(s.len() == (1 << t) + 1, "t = {t}: {} members", s.len());
        let mut seen = vec![0u32; 1 << n];
        for k in 0..s.len() {
            ensure!(s.subspace(k).dim() == t, "t = {t}: dim E_{k}");
            ensure!(s.dual(k).dim() == t, "t = {t}: dim E_{k}^⊥");
            for v in s.subspace(k).iter().filter(|&v| v != 0) {
                seen[v as usize] += 1;
            }
            for j in 0..k {
                ensure!(
                    s.subspace(k).meets_trivially(s.subspace(j)),
                    "t = {t}: E_{j} ∩ E_{k} ≠ 0"
                );
                ensure!(
                    s.dual(k).meets_trivially(s.dual(j)),
                    "t = {t}: duals {j}, {k} meet"
                );
            }
        }
        ensure!(
            seen[1..].iter().all(|&c| c == 1),
            "t = {t}: not a partition"
        );
    }
    for n in 1..=10 {
        for _ in 0..50 {
            let gens: Vec<u32> = (0..rng.gen_range(0..=n))
                .map(|_| rng.gen_range(0..1 << n))
                .collect();
            let s = Subspace::span(n, &gens).map_err(|e| e.to_string())?;
            ensure!(s.dual().dual() == s, "dual of dual, n = {n}");
            ensure!(s.dim() + s.dual().dim() == n, "dimension of dual, n = {n}");
        }
    }
    let mut codes = 0;
    let mut specs: Vec<(VectorialFunction, Pairing)> = vec![];
    for spec in cross_validation_families() {
        specs.push(family(spec)?);
    }
    for pt in table_points()? {
        specs.push((pt.function, pt.pairing));
    }
    for (f, p) in &specs {
        let code = code_of(f, p)?;
        let check = verify_weight_routes(&code, 0, 0).map_err(|e| e.to_string())?;
        ensure!(
            check.exhaustive && check.agrees(),
            "weight routes: {check:?}"
        );
        codes += 1;
    }
    Ok(format!(
        "all suites clean; weight routes equal on {codes} codes"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            1,
            "bent n=6 m=3 example",
            Duration::from_secs(1),
            criterion1,
        ),
        (2, "Gold n=7 AB example", Duration::from_secs(5), criterion2),
        (
            3,
            "theorem6 n=6 example",
            Duration::from_secs(5),
            criterion3,
        ),
        (4, "closed-form tables", Duration::from_secs(60), criterion4),
        (
            5,
            "checker cross-validation",
            Duration::from_secs(600),
            criterion5,
        ),
        (6, "negative fixtures", Duration::from_secs(600), criterion6),
        (7, "theorem8 n=6", Duration::from_secs(120), criterion7),
        (
            8,
            "theorem10 n=10 i=2",
            Duration::from_secs(600),
            criterion8,
        ),
        (9, "property suites", Duration::from_secs(300), criterion9),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if took <= limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; over the {limit:?} limit"))
            }
        });
        match outcome {
            Ok(msg) => println!("criterion {id} PASS ({name}, {took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id} FAIL ({name}, {took:.2?}): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria pass");
}
