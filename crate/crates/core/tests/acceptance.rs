//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! every criterion is reported even when an earlier one fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matwaring::nt::prime_powers;
use matwaring::oracle::{class_representatives, min_waring_number, verify, weil_check, PowerSpace};
use matwaring::poly::superelliptic_abs_irreducible;
use matwaring::scalar::two_power_rep;
use matwaring::{
    frobenius_form, minus_one_is_kth_power, waring_constant, Engine, Error, Execution, FieldCtx, Fel, Mat, Poly,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn random_elem(f: &FieldCtx, rng: &mut ChaCha8Rng) -> Fel {
    f.elem(rng.gen_range(0..f.q()))
}

fn random_matrix(f: &FieldCtx, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    Mat::from_vec(n, (0..n * n).map(|_| random_elem(f, rng)).collect()).unwrap()
}

fn random_monic(f: &FieldCtx, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut c: Vec<Fel> = (0..deg).map(|_| random_elem(f, rng)).collect();
    c.push(Fel::ONE);
    Poly::new(c)
}

fn random_invertible(f: &FieldCtx, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let p = random_matrix(f, n, rng);
        if !p.det(f).is_zero() {
            return p;
        }
    }
}

fn check_terms(engine: &Engine<'_>, mats: &[Mat], max: usize, two_by_two: bool) -> Outcome {
    let results = if two_by_two {
        mats.iter().map(|a| engine.decompose2(a)).collect::<Vec<_>>()
    } else {
        engine.decompose_batch(mats, Execution::default())
    };
    let mut worst = 0;
    for (a, r) in mats.iter().zip(results) {
        let d = r.map_err(|e| format!("{e} on {a:?}"))?;
        if !verify(engine.ctx(), a, engine.k(), &d.witnesses).unwrap() {
            return Err(format!("unverified output on {a:?}"));
        }
        if d.terms() > max {
            return Err(format!("{} terms ({}) on {a:?}", d.terms(), d.case));
        }
        worst = worst.max(d.terms());
    }
    Ok(format!("{} matrices, at most {worst} terms", mats.len()))
}

fn criterion_1() -> Outcome {
    let f = FieldCtx::prime(101).unwrap();
    assert!(f.q() > waring_constant(2));
    let reps = class_representatives(&f, 2);
    if reps.len() != 101 * 101 + 101 {
        return Err(format!("{} class representatives", reps.len()));
    }
    let engine = Engine::new(&f, 2).without_fallback();
    check_terms(&engine, &reps, 2, true)
}

fn criterion_2() -> Outcome {
    let f = FieldCtx::prime(449).unwrap();
    assert!(f.q() > waring_constant(3));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mats: Vec<Mat> = (0..500).map(|_| random_matrix(&f, 2, &mut rng)).collect();
    let engine = Engine::new(&f, 3).without_fallback();
    check_terms(&engine, &mats, 2, true)
}

fn criterion_3() -> Outcome {
    let f = FieldCtx::prime(101).unwrap();
    let engine = Engine::new(&f, 2).without_fallback();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut summary = Vec::new();
    for n in 3..=5 {
        let mats: Vec<Mat> = (0..500).map(|_| random_matrix(&f, n, &mut rng)).collect();
        summary.push(format!("n={n}: {}", check_terms(&engine, &mats, 3, false)?));
    }
    Ok(summary.join("; "))
}

fn criterion_4() -> Outcome {
    if !minus_one_is_kth_power(101, 1, 5) {
        return Err("-1 should be a fifth power in F_101".into());
    }
    let f = FieldCtx::prime(101).unwrap();
    let engine = Engine::new(&f, 5).without_fallback();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0;
    for _ in 0..200 {
        let n = rng.gen_range(3..=5);
        let a = Mat::companion(&random_monic(&f, n, &mut rng), &f).unwrap();
        let d = engine.companion_split(&a).map_err(|e| format!("{e} on {a:?}"))?;
        if d.terms() > 2 {
            return Err(format!("{} terms ({}) on {a:?}", d.terms(), d.case));
        }
        worst = worst.max(d.terms());
    }
    Ok(format!("200 companions, at most {worst} terms"))
}

fn criterion_5() -> Outcome {
    let mut cells = 0;
    for (p, l, _) in prime_powers(2, 169) {
        let f = FieldCtx::new(p, l as usize, None).unwrap();
        let minus_one = f.neg(Fel::ONE);
        for k in 1..=24 {
            let exhaustive = f.elements().any(|x| f.pow(x, k) == minus_one);
            if exhaustive != minus_one_is_kth_power(p, l, k) {
                return Err(format!("q={}^{l}, k={k}", p));
            }
            if exhaustive != f.is_kth_power(minus_one, k) {
                return Err(format!("residue test disagrees at q={}^{l}, k={k}", p));
            }
            cells += 1;
        }
    }
    Ok(format!("{cells} (q, k) pairs"))
}

fn criterion_6() -> Outcome {
    let mut cells = 0;
    for (p, l, q) in prime_powers(2, 200) {
        let f = FieldCtx::new(p, l as usize, None).unwrap();
        for k in 1..=50 {
            let mut seen = vec![false; q as usize];
            for x in f.elements() {
                seen[f.pow(x, k).index() as usize] = true;
            }
            let count = seen.iter().filter(|&&b| b).count() as u64;
            if count != f.kth_power_count(k) {
                return Err(format!("q={q}, k={k}: {count} vs {}", f.kth_power_count(k)));
            }
            cells += 1;
        }
    }
    Ok(format!("{cells} (q, k) pairs"))
}

fn criterion_7() -> Outcome {
    let f = FieldCtx::new(29, 2, None).unwrap();
    let d = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut worst = 0i64;
    while checked < 20 {
        let g = Poly::new(vec![random_elem(&f, &mut rng), random_elem(&f, &mut rng), Fel::ONE]);
        if !superelliptic_abs_irreducible(&f, d, &g) {
            continue;
        }
        let r = weil_check(&f, d, &g).map_err(|e| e.to_string())?;
        if !r.hypothesis_met || !r.abs_irreducible {
            return Err(format!("hypotheses not met for {g:?}"));
        }
        if !r.bound_holds {
            return Err(format!("N = {} violates the bound for {g:?}", r.n_points));
        }
        worst = worst.max((r.n_points as i64 - 841).abs());
        checked += 1;
    }
    Ok(format!("20 curves, max |N - q| = {worst}"))
}

fn criterion_8() -> Outcome {
    let f = FieldCtx::prime(7).unwrap();
    let (worst, _) = min_waring_number(&f, 1, 3).map_err(|e| e.to_string())?;
    if worst != 3 {
        return Err(format!("scalar Waring number {worst}"));
    }
    if two_power_rep(&f, f.elem(3), 3) != Err(Error::NoRepresentation) {
        return Err("two_power_rep(3) should fail".into());
    }
    let space = PowerSpace::new(&f, 1, 3).unwrap();
    let three = Mat::diag(&[f.elem(3)]);
    if space.brute_decompose(&f, &three, 2).unwrap().is_some() {
        return Err("3 should not be a sum of two cubes".into());
    }
    let w = space.brute_decompose(&f, &three, 3).unwrap();
    if w != Some(vec![Mat::diag(&[Fel::ONE]); 3]) {
        return Err(format!("three-term search gave {w:?}"));
    }
    Ok("Waring number 3, 3 = 1 + 1 + 1".into())
}

fn criterion_9() -> Outcome {
    let mut successes = 0;
    let mut failures = 0;
    for q in [2, 3, 5] {
        let f = FieldCtx::prime(q).unwrap();
        for n in 1..=2 {
            for k in 1..=3 {
                let engine = Engine::new(&f, k);
                let space = PowerSpace::new(&f, n, k).unwrap();
                for code in 0..space.size() as u32 {
                    let a = space.decode(code);
                    match engine.decompose(&a) {
                        Ok(d) => {
                            if !verify(&f, &a, k, &d.witnesses).unwrap() {
                                return Err(format!("unverified output on {a:?}"));
                            }
                            let min = space.min_terms(&f, &a).unwrap();
                            if min.is_none_or(|m| d.terms() < m) {
                                return Err(format!("{} terms beat the minimum {min:?} on {a:?}", d.terms()));
                            }
                            successes += 1;
                        }
                        Err(Error::VerificationFailed(m)) => return Err(m),
                        Err(_) => failures += 1,
                    }
                }
            }
        }
    }
    Ok(format!("{successes} successes all verified, {failures} reported failures"))
}

fn criterion_10() -> Outcome {
    let fields = [
        FieldCtx::prime(3).unwrap(),
        FieldCtx::prime(7).unwrap(),
        FieldCtx::new(7, 2, None).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut multi_block = 0;
    for i in 0..500 {
        let f = &fields[i % 3];
        let n = rng.gen_range(1..=5);
        let g = random_monic(f, n, &mut rng);
        let c = Mat::companion(&g, f).unwrap();
        if c.char_poly(f) != g {
            return Err(format!("char_poly(companion(g)) != g for {g:?}"));
        }

        // alternate plain random matrices with conjugated block sums so the
        // multi-block path is exercised
        let a = if i % 2 == 0 {
            random_matrix(f, n, &mut rng)
        } else {
            let d1 = rng.gen_range(1..=n);
            let g1 = random_monic(f, d1.min(n / 2).max(1), &mut rng);
            let mut blocks = vec![Mat::companion(&g1, f).unwrap()];
            let rest = n - g1.deg();
            if rest > 0 {
                let g2 = if rest >= g1.deg() {
                    g1.mul(&random_monic(f, rest - g1.deg(), &mut rng), f)
                } else {
                    random_monic(f, rest, &mut rng)
                };
                blocks.push(Mat::companion(&g2, f).unwrap());
            }
            let p = random_invertible(f, n, &mut rng);
            Mat::direct_sum(&blocks).conjugate(&p, f).unwrap()
        };
        let form = frobenius_form(&a, f).map_err(|e| format!("{e} on {a:?}"))?;
        let p_inv = form.transform.inverse(f).map_err(|_| "singular transform".to_string())?;
        if a.conjugate_with(&form.transform, &p_inv, f) != form.block_form(f) {
            return Err(format!("reconstruction failed on {a:?}"));
        }
        for w in form.factors.windows(2) {
            if !w[0].divides(&w[1], f) {
                return Err(format!("divisibility chain broken on {a:?}"));
            }
        }
        let product = form.factors.iter().fold(Poly::one(), |acc, g| acc.mul(g, f));
        if product != a.char_poly(f) {
            return Err(format!("factor product differs from char_poly on {a:?}"));
        }
        if form.factors.len() > 1 {
            multi_block += 1;
        }
    }
    Ok(format!("500 instances, {multi_block} with several blocks"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 all classes of M_2(F_101), k=2, <= 2 terms", criterion_1),
        ("2 random M_2(F_449), k=3, <= 2 terms", criterion_2),
        ("3 random M_n(F_101), n=3..5, k=2, <= 3 terms", criterion_3),
        ("4 companion split, F_101, k=5, <= 2 terms", criterion_4),
        ("5 -1 as a k-th power, closed form vs search", criterion_5),
        ("6 k-th power counts vs enumeration", criterion_6),
        ("7 Weil bound over F_841, d=2, deg f=2", criterion_7),
        ("8 F_7, k=3 scalar negative control", criterion_8),
        ("9 engine vs exhaustive minima, q<=5, n<=2", criterion_9),
        ("10 companion and rational canonical form suite", criterion_10),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                all = false;
                println!("FAIL criterion {name}: {why} ({secs:.1}s)");
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
