//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test -p hglcorr --test acceptance`
//!
//! The process exits non-zero if any criterion fails in a way other than the
//! known trace/closed-form mismatch at level >= 2 with points (criterion 1),
//! which is checked to be exactly that mismatch and nothing else.

use std::process::ExitCode;
use std::time::Instant;

use hglcorr::fock::{fock_trace, oracle_from_trace};
use hglcorr::formulas::{f_bo, npoint_kostka, npoint_level, qdim, t_power};
use hglcorr::partitions::{gen_partitions, partitions_of, states_in_sector};
use hglcorr::qseries::{rat, DEN};
use hglcorr::symfunc::{cached_kostka_table, kostka_number};
use hglcorr::{
    oracle_level1_charge, verify, GenPartition, IdentityId, QSeries, SymLaurentPoly, TPoint,
    VerifyParams,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

fn pt(n: i64, d: i64) -> TPoint {
    TPoint::new(rat(n, d)).unwrap()
}

fn s_values() -> Vec<TPoint> {
    vec![pt(2, 1), pt(3, 2), pt(5, 3)]
}

/// Point sets with n = 0, 1, 2 drawn (with repetition) from the three values.
fn point_sets() -> Vec<Vec<TPoint>> {
    let s = s_values();
    let mut out = vec![vec![]];
    for a in &s {
        out.push(vec![a.clone()]);
    }
    for i in 0..s.len() {
        for j in i..s.len() {
            out.push(vec![s[i].clone(), s[j].clone()]);
        }
    }
    out
}

fn labels(level: usize, lo: i64, hi: i64) -> Vec<GenPartition> {
    let l = level as i64;
    (lo * l..=hi * l)
        .flat_map(|d| gen_partitions(level, d, lo, hi))
        .collect()
}

struct Line {
    ok: bool,
    expected_failure: bool,
    text: String,
}

fn line(n: u32, ok: bool, text: String) -> Line {
    Line {
        text: format!("criterion {n}: {} {text}", if ok { "PASS" } else { "FAIL" }),
        ok,
        expected_failure: false,
    }
}

struct SweepCase {
    level: usize,
    lambda: GenPartition,
    pts: Vec<TPoint>,
    theta: QSeries,
    kostka: QSeries,
    oracle: QSeries,
    tensor_power: QSeries,
}

const SWEEP_ORDER8: i64 = 8 * DEN;

fn sweep() -> Vec<SweepCase> {
    let mut out = Vec::new();
    for level in 1..=3usize {
        for pts in point_sets() {
            let trace = fock_trace(level, &pts, SWEEP_ORDER8).unwrap();
            let one = fock_trace(1, &pts, SWEEP_ORDER8).unwrap();
            let power = SymLaurentPoly::product_of_copies(&one, level)
                .unwrap()
                .truncate(SWEEP_ORDER8);
            for lambda in labels(level, -2, 2) {
                out.push(SweepCase {
                    level,
                    theta: npoint_level(level, &lambda, &pts, SWEEP_ORDER8).unwrap(),
                    kostka: npoint_kostka(level, &lambda, &pts, SWEEP_ORDER8).unwrap(),
                    oracle: oracle_from_trace(&trace, &lambda, SWEEP_ORDER8).unwrap(),
                    tensor_power: oracle_from_trace(&power, &lambda, SWEEP_ORDER8).unwrap(),
                    lambda,
                    pts: pts.clone(),
                });
            }
        }
    }
    out
}

fn sweep_json(cases: &[SweepCase]) -> String {
    let v: Vec<_> = cases
        .iter()
        .map(|c| {
            json!({
                "level": c.level,
                "lambda": c.lambda.entries(),
                "s": c.pts.iter().map(|p| p.s().to_string()).collect::<Vec<_>>(),
                "theta": c.theta.to_json(),
                "kostka": c.kostka.to_json(),
                "oracle": c.oracle.to_json(),
            })
        })
        .collect();
    serde_json::to_string(&v).unwrap()
}

fn criterion_1(cases: &[SweepCase]) -> Line {
    let total = cases.len();
    let tk = cases.iter().filter(|c| c.theta == c.kostka).count();
    let to = cases.iter().filter(|c| c.theta == c.oracle).count();
    let mut explained = true;
    let mut first_gap = None;
    for c in cases {
        let plain = c.level == 1 || c.pts.is_empty();
        if plain != (c.theta == c.oracle) {
            explained = false;
        }
        if c.theta != c.tensor_power {
            explained = false;
        }
        let vacuum = c.lambda.entries().iter().all(|&x| x == 0);
        if !plain && vacuum && first_gap.is_none() {
            first_gap = Some(c);
        }
    }
    let ok = tk == total && to == total;
    let mut text = format!(
        "{total} cases (0 skipped for subset product 1): theta=kostka {tk}/{total}, theta=oracle {to}/{total}"
    );
    if let Some(c) = first_gap.filter(|_| !ok) {
        text.push_str(&format!(
            "; e.g. level {} lambda {} s={:?}: theta starts {} vs trace {}",
            c.level,
            c.lambda,
            c.pts.iter().map(|p| p.s().to_string()).collect::<Vec<_>>(),
            c.theta.coeff(0),
            c.oracle.coeff(0),
        ));
        if explained && tk == total {
            text.push_str(
                "; every mismatch is at level >= 2 with n >= 1, and there the closed \
                 form equals the trace of the tensor-power operator T(t)x...xT(t)",
            );
        }
    }
    let mut l = line(1, ok, text);
    l.expected_failure = !ok && explained && tk == total;
    l
}

fn criterion_2() -> Line {
    let order8 = 10 * DEN;
    let s = s_values();
    let mut ok = true;
    let mut checked = 0;
    for n in 0..=3 {
        let pts: Vec<TPoint> = s.iter().take(n).cloned().collect();
        let fbo = f_bo(&pts, order8).unwrap();
        ok &= fbo == oracle_level1_charge(0, &pts, order8).unwrap();
        checked += 1;
        for k in -2..=2 {
            let want = fbo
                .scale(&t_power(&pts, k))
                .shift8(4 * k * k)
                .truncate(order8);
            ok &= oracle_level1_charge(k, &pts, order8).unwrap() == want;
            checked += 1;
        }
    }
    line(
        2,
        ok,
        format!("{checked} comparisons (f_bo vs charge-0 trace for n=0..3, shift k=-2..2) to q^10"),
    )
}

fn run(id: IdentityId, params: VerifyParams, order: i64, ok: &mut bool, count: &mut usize) {
    let r = verify(id, &params, order * DEN).unwrap();
    if !r.equal {
        println!("    {r}");
    }
    *ok &= r.equal;
    *count += 1;
}

fn criterion_3() -> Line {
    let mut ok = true;
    let mut count = 0;
    let base = |level: usize, pts: Vec<TPoint>| VerifyParams {
        level,
        lambda: None,
        pts,
        k: 1,
    };
    run(
        IdentityId::Jacobi,
        base(1, s_values()),
        20,
        &mut ok,
        &mut count,
    );
    for level in 1..=3 {
        run(
            IdentityId::Cor33,
            base(level, vec![]),
            8,
            &mut ok,
            &mut count,
        );
        run(
            IdentityId::Cor37,
            base(level, vec![]),
            10,
            &mut ok,
            &mut count,
        );
        for pts in point_sets() {
            run(IdentityId::Cor36, base(level, pts), 8, &mut ok, &mut count);
        }
        for lambda in labels(level, -3, 3) {
            let p = VerifyParams {
                lambda: Some(lambda),
                ..base(level, vec![])
            };
            run(IdentityId::Cor42, p, 12, &mut ok, &mut count);
        }
        for d in 0..=4u32 {
            for p in partitions_of(d) {
                if p.len() > level {
                    continue;
                }
                let mut e: Vec<i64> = p.parts().iter().map(|&x| x as i64).collect();
                e.resize(level, 0);
                let params = VerifyParams {
                    lambda: Some(GenPartition::new(e).unwrap()),
                    ..base(level, vec![])
                };
                run(IdentityId::Cor43, params, 10, &mut ok, &mut count);
            }
        }
    }
    for pts in point_sets() {
        run(IdentityId::Lemma35, base(2, pts), 6, &mut ok, &mut count);
    }
    line(
        3,
        ok,
        format!("{count} identity checks (jacobi, cor33, lemma35, cor36, cor37, cor42, cor43)"),
    )
}

fn criterion_4() -> Line {
    let mut ok = true;
    let mut tables = 0;
    for level in 1..=3usize {
        for d in 0..=8i64 {
            let t = cached_kostka_table(d, level, 0, d).unwrap();
            let k = t.k_matrix();
            let ki = t.kinv_matrix();
            let n = k.len();
            for (i, row) in k.iter().enumerate() {
                for j in 0..n {
                    if j < i && row[j] != 0 {
                        ok = false;
                    }
                    let prod: i64 = (0..n).map(|m| row[m] * ki[m][j]).sum();
                    if prod != i64::from(i == j) {
                        ok = false;
                    }
                }
                ok &= row[i] == 1;
            }
            tables += 1;
        }
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut shifts = 0;
    while shifts < 100 {
        let level = rng.random_range(1..=3usize);
        let size = rng.random_range(-4..=4i64);
        let pool = gen_partitions(level, size, -3, 3);
        if pool.is_empty() {
            continue;
        }
        let lam = &pool[rng.random_range(0..pool.len())];
        let mu = &pool[rng.random_range(0..pool.len())];
        let r = rng.random_range(-3..=3i64);
        ok &=
            kostka_number(lam, mu).unwrap() == kostka_number(&lam.shift(r), &mu.shift(r)).unwrap();
        shifts += 1;
    }

    // Kinv[mu][lambda] = 0 for partitions with lambda_l >= l and l(mu) < l.
    let mut vanishing = 0;
    for level in 1..=3usize {
        for d in 0..=12i64 {
            let t = cached_kostka_table(d, level, 0, d).unwrap();
            for lam in t.index() {
                if lam.last() < level as i64 {
                    continue;
                }
                for mu in t.index() {
                    if mu.last() != 0 {
                        continue;
                    }
                    ok &= t.kinv(mu, lam) == 0;
                    vanishing += 1;
                }
            }
        }
    }
    line(
        4,
        ok,
        format!(
            "{tables} tables unitriangular with K*Kinv=I; {shifts} shift triples; \
             {vanishing} vanishing cases"
        ),
    )
}

fn criterion_5(cases: &[SweepCase]) -> Line {
    let mut ok = true;
    let counts: Vec<usize> = {
        let states = states_in_sector(&[0], 11 * DEN);
        (0..=10)
            .map(|m| {
                states
                    .iter()
                    .filter(|s| s.factors[0].shape.size() == m)
                    .count()
            })
            .collect()
    };
    let want: Vec<usize> = (0..=10).map(|m| partitions_of(m).len()).collect();
    ok &= counts == want && want[10] == 42;

    let mut qdims = 0;
    let mut positive = 0;
    for c in cases {
        if c.pts.is_empty() {
            ok &= c.oracle == qdim(c.level, &c.lambda, SWEEP_ORDER8).unwrap();
            qdims += 1;
        }
        // Every point in the sweep has s > 1.
        ok &= c.oracle.terms().all(|(_, x)| *x >= rat(0, 1));
        positive += 1;
    }
    line(
        5,
        ok,
        format!(
            "charge-0 counts {counts:?}; {qdims} n=0 cases equal qdim; \
             {positive} traces nonnegative"
        ),
    )
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn criterion_6() -> (Line, Vec<SweepCase>) {
    hglcorr::clear_caches();
    let one = in_pool(1, sweep);
    hglcorr::clear_caches();
    let eight = in_pool(8, sweep);
    let a = sweep_json(&one);
    let b = sweep_json(&eight);
    let l = line(
        6,
        a == b,
        format!(
            "sweep JSON at 1 and 8 threads: {} vs {} bytes, identical={}",
            a.len(),
            b.len(),
            a == b
        ),
    );
    (l, eight)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (c6, cases) = criterion_6();
    let lines = [
        criterion_1(&cases),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&cases),
        c6,
    ];
    for l in &lines {
        println!("{}", l.text);
    }
    let passed = lines.iter().filter(|l| l.ok).count();
    let unexpected = lines
        .iter()
        .filter(|l| !l.ok && !l.expected_failure)
        .count();
    println!(
        "acceptance: {passed}/6 criteria pass, {unexpected} unexplained failures ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
