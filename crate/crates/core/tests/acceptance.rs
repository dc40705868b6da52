//! Acceptance run: one PASS/FAIL line per criterion. Every check goes
//! through an oracle in `common` rather than the library's own certificate.

mod common;

use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use blockgame::combinatorics::{
    disjointify, disjointify_masks, mod_k_classes, reconstruct_tuple, IndexSet,
};
use blockgame::game::{play_discrete, solve_bounded, Determination, MenuScript, SampledLegal};
use blockgame::net::{covering_sequence, round_to_net, verify_covering, NetConfig, NetCursor};
use blockgame::transfer::{composite_nearness, run_adapted, TransferContext};
use blockgame::verify::{
    menu_scripts, random_block_subsequence, random_reconstruction_instance, random_rounding_input,
    random_solver_instance, RandomBlocks,
};
use blockgame::{BlockVector, FiniteBlockSequence, NormKind, NormPlugin, Rational};
use common::*;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [NormKind; 3] = [NormKind::Ell1, NormKind::Sup, NormKind::Ell2];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!(
            "took {:.2} s, limit {} s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        )
    })
}

/// Runs `cases` checks and reports the first few failures.
fn tally(cases: usize, mut case: impl FnMut(usize) -> Result<(), String>) -> (usize, Vec<String>) {
    let mut failures = Vec::new();
    for c in 0..cases {
        if let Err(e) = case(c) {
            failures.push(format!("case {c}: {e}"));
        }
    }
    (cases, failures)
}

fn summarize(cases: usize, failures: Vec<String>, elapsed: Duration) -> Outcome {
    if failures.is_empty() {
        Ok(format!(
            "{cases} cases, 0 failures, {:.2} s",
            elapsed.as_secs_f64()
        ))
    } else {
        let n = failures.len();
        let shown: Vec<String> = failures.into_iter().take(3).collect();
        Err(format!("{n} of {cases} cases failed; {}", shown.join("; ")))
    }
}

fn rounding() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    let (cases, failures) = tally(500, |_| {
        let kind = KINDS[rng.gen_range(0..3)];
        let cfg = NetConfig::default().with_norm(NormPlugin::new(kind));
        let (board, w) = random_rounding_input(&mut rng, &cfg).map_err(|e| e.to_string())?;
        ensure(
            board.len() <= 6 && board.iter().all(|z| z.max_support().unwrap() < 12),
            || "input outside the admissible range".into(),
        )?;
        let r = round_to_net(&w, &board, &cfg).map_err(|e| e.to_string())?;
        let mu = solve_span(board.as_slice(), &w).ok_or("w not in span")?;
        let mu_t = solve_span(board.as_slice(), &r.rounded).ok_or("w~ not in span")?;
        ensure(mu.iter().filter(|m| !m.is_zero()).count() >= 2, || {
            "support below 2".into()
        })?;
        ensure(
            mu.iter()
                .zip(&mu_t)
                .all(|(a, b)| a.is_zero() == b.is_zero()),
            || "Z~-supports differ".into(),
        )?;
        ensure(in_net(kind, &r.rounded), || {
            format!("{} is not a net element", r.rounded)
        })?;
        let m1 = mu.iter().position(|m| !m.is_zero()).unwrap();
        let bound = two_pow(1 - k_halving(m1) as i64);
        ensure(norm_le(kind, &sub(&w, &r.rounded), &bound), || {
            format!("‖w - w~‖ exceeds {bound} for w = {w}")
        })
    });
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    summarize(cases, failures, elapsed)
}

fn covering() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FE);
    let board = FiniteBlockSequence::standard_basis(24);
    let z = covering_sequence(&board);
    let (cases, failures) = tally(200, |_| {
        let kind = KINDS[rng.gen_range(0..3)];
        let cfg = NetConfig::default().with_norm(NormPlugin::new(kind));
        let len = rng.gen_range(1..=5);
        let u = random_block_subsequence(&mut rng, &z, 0, len, cfg.norm());
        ensure(is_block_subsequence(&u, &z), || {
            "U is not a block subsequence of Z".into()
        })?;
        ensure(u.iter().all(|x| norm_le(kind, x, &Rational::one())), || {
            "U leaves the unit ball".into()
        })?;
        let (rounded, _) = verify_covering(&u, &z, &board, &cfg).map_err(|e| e.to_string())?;
        ensure(rounded.len() == u.len(), || "length changed".into())?;
        ensure(rounded.iter().all(|x| in_net(kind, x)), || "U~ ⊄ 𝔇".into())?;
        ensure(is_block_subsequence(&rounded, &board), || {
            "U~ is not ⪯ Z~".into()
        })?;
        for (i, (a, b)) in u.iter().zip(rounded.iter()).enumerate() {
            let delta = two_pow(-(i as i64));
            ensure(norm_le(kind, &sub(a, b), &delta), || {
                format!("‖u_{i} - u~_{i}‖ exceeds δ_{i} = {delta}")
            })?;
        }
        Ok(())
    });
    summarize(cases, failures, start.elapsed())
}

fn enumeration() -> Outcome {
    let start = Instant::now();
    let cfg = NetConfig::default();
    let mut counts = Vec::new();
    for n in 1..=3 {
        let mut cursor = NetCursor::new(n, &cfg).map_err(|e| e.to_string())?;
        let mut count = 0u64;
        let mut mismatch: Option<String> = None;
        for lo in 0..n {
            for hi in lo..n {
                scan_segment(NormKind::Ell1, lo, hi, |t| {
                    if mismatch.is_some() {
                        return;
                    }
                    if !cursor.advance() {
                        mismatch = Some(format!("n = {n}: library stops before {lo}..{hi} {t:?}"));
                        return;
                    }
                    let seg = cursor.segment();
                    if (seg.lo, seg.hi) != (lo, hi) || cursor.mantissas() != t {
                        mismatch = Some(format!(
                            "n = {n}: library has {}..{} {:?}, scan has {lo}..{hi} {t:?}",
                            seg.lo,
                            seg.hi,
                            cursor.mantissas()
                        ));
                        return;
                    }
                    // the mantissas fix the vector only together with the
                    // exponents, so compare the vectors every so often
                    if count.is_multiple_of(1_000_003) && cursor.vector() != mantissa_vector(lo, t)
                    {
                        mismatch = Some(format!("n = {n}: vector differs at {t:?}"));
                    }
                    count += 1;
                });
            }
        }
        if let Some(m) = mismatch {
            return Err(m);
        }
        if cursor.advance() {
            return Err(format!(
                "n = {n}: library lists {} beyond the scan",
                cursor.vector()
            ));
        }
        counts.push(count);
    }
    ensure(counts[0] == 8, || {
        format!("n = 1 gives {} vectors, not 8", counts[0])
    })?;
    Ok(format!(
        "n = 1, 2, 3 give {:?} vectors, equal to the lattice scan element by element, {:.2} s",
        counts,
        start.elapsed().as_secs_f64()
    ))
}

fn solver() -> Outcome {
    let start = Instant::now();
    let cfg = NetConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x50_1BE);
    let mut accepted = 0;
    let (cases, failures) = tally(100, |_| {
        let inst = random_solver_instance(&mut rng, &cfg, 200).map_err(|e| e.to_string())?;
        let menu: Vec<BlockVector> = inst.menu.iter().map(|m| m.as_slice()[0].clone()).collect();
        let out = solve_bounded(
            &inst.board,
            &inst.prefix,
            inst.horizon,
            &inst.menu,
            &inst.family,
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        let expected = minimax(&inst.prefix, inst.horizon, &menu, &inst.family);
        ensure(out.accepts == expected, || {
            format!(
                "solver says {}, minimax says {expected} for {:?}",
                out.accepts, inst.family
            )
        })?;
        if let Some(strategy) = out.strategy {
            accepted += 1;
            for script in menu_scripts(inst.menu.len(), inst.horizon) {
                let t = play_discrete(
                    &inst.board,
                    &inst.prefix,
                    inst.horizon,
                    &mut MenuScript::new(inst.menu.clone(), script.clone()),
                    &mut strategy.clone(),
                    &inst.family,
                    &cfg,
                )
                .map_err(|e| e.to_string())?;
                ensure(t.verdict == Some(true), || {
                    format!("witness loses to {script:?}")
                })?;
            }
        }
        Ok(())
    });
    let mut out = summarize(cases, failures, start.elapsed())?;
    out.push_str(&format!(", {accepted} accepting"));
    Ok(out)
}

fn transfer() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7EA);
    let open = |_: &FiniteBlockSequence| Determination::Undetermined;
    let mut rounds = 0;
    let (cases, failures) = tally(50, |_| {
        let kind = [NormKind::Ell1, NormKind::Sup][rng.gen_range(0..2)];
        let cfg = NetConfig::default().with_norm(NormPlugin::new(kind));
        let ctx = TransferContext::new(FiniteBlockSequence::standard_basis(128), cfg)
            .map_err(|e| e.to_string())?;
        let horizon = rng.gen_range(1..=4);
        let mut player_i = RandomBlocks::new(ChaCha8Rng::seed_from_u64(rng.gen()));
        let discrete = SampledLegal::new(ChaCha8Rng::seed_from_u64(rng.gen()));
        let run = run_adapted(&ctx, &mut player_i, discrete, horizon, &open)
            .map_err(|e| e.to_string())?;
        let offers = run.transcript.moves_i();
        let played: Vec<BlockVector> = run.transcript.picks().into_iter().cloned().collect();
        let discrete = run.discrete_outcome.as_slice();
        ensure(played.len() == horizon && discrete.len() == horizon, || {
            "short run".into()
        })?;
        let c = Rational::one();
        for n in 0..horizon {
            rounds += 1;
            let delta_n = two_pow(-(n as i64));
            let pick_bound = q(4, 5) * &delta_n;
            // normalize player I's move by its exact norm
            let u: Vec<BlockVector> = offers[n]
                .iter()
                .map(|z| {
                    let r: Rational = match kind {
                        NormKind::Ell1 => z.iter().map(|(_, c)| c.abs()).sum(),
                        _ => z.iter().map(|(_, c)| c.abs()).max().unwrap(),
                    };
                    z.scale(&r.recip())
                })
                .collect();
            let u = FiniteBlockSequence::new(u).map_err(|e| e.to_string())?;
            let (u_net, _) = verify_covering(&u, ctx.board(), ctx.board_net(), ctx.inner())
                .map_err(|e| e.to_string())?;
            let k0 = (n..u.len())
                .find(|&k| {
                    n == 0
                        || played[n - 1].max_support().unwrap()
                            < u.as_slice()[k].min_support().unwrap()
                })
                .ok_or("no admissible k_0")?;
            let lambdas = solve_span(&u_net.as_slice()[k0..], &discrete[n])
                .ok_or_else(|| format!("x~_{n} not in the span of the rounded tail"))?;
            let four_c = q(4, 1) * &c;
            ensure(lambdas.iter().all(|l| l.abs() <= four_c), || {
                format!("round {n}: some |λ| exceeds 4C")
            })?;
            let raw = combine(&u.as_slice()[k0..], &lambdas);
            ensure(norm_le(kind, &sub(&raw, &discrete[n]), &pick_bound), || {
                format!("round {n}: ‖x_{n} - x~_{n}‖ exceeds (4/5)δ_{n}")
            })?;
            ensure(norm_le(kind, &played[n], &Rational::one()), || {
                format!("round {n}: played pick leaves the unit ball")
            })?;
            ensure(
                norm_le(kind, &sub(&played[n], &discrete[n]), &pick_bound),
                || format!("round {n}: played pick is not (4/5)δ_{n}-near x~_{n}"),
            )?;
            // the played pick is x_n itself or x_n scaled into the ball
            let ratio = solve_span(std::slice::from_ref(&raw), &played[n])
                .ok_or_else(|| format!("round {n}: played pick is not a multiple of x_{n}"))?;
            ensure(
                ratio[0].is_positive() && ratio[0] <= Rational::one(),
                || format!("round {n}: scaling factor {}", ratio[0]),
            )?;
        }
        // a family member Δ/(10C)-near the discrete outcome
        let reference: Vec<BlockVector> = discrete
            .iter()
            .enumerate()
            .map(|(n, x)| {
                let top = x.max_support().unwrap();
                let bump = two_pow(-(n as i64)) / q(20, 1);
                let c = x.coefficient(top);
                let moved = if (&c + &bump).is_zero() {
                    c - bump
                } else {
                    c + bump
                };
                let mut pairs: Vec<(usize, Rational)> = x
                    .iter()
                    .filter(|(i, _)| *i != top)
                    .map(|(i, c)| (i, c.clone()))
                    .collect();
                pairs.push((top, moved));
                BlockVector::from_pairs(pairs)
            })
            .collect();
        for (n, (x, v)) in played.iter().zip(&reference).enumerate() {
            ensure(norm_le(kind, &sub(x, v), &two_pow(-(n as i64))), || {
                format!("composite distance at {n} exceeds δ_{n}")
            })?;
        }
        let reference = FiniteBlockSequence::new(reference).map_err(|e| e.to_string())?;
        let played = FiniteBlockSequence::new(played).map_err(|e| e.to_string())?;
        composite_nearness(&played, &run.discrete_outcome, &reference, &ctx)
            .map_err(|e| e.to_string())?;
        Ok(())
    });
    let mut out = summarize(cases, failures, start.elapsed())?;
    out.push_str(&format!(", {rounds} rounds"));
    Ok(out)
}

fn disjointification() -> Outcome {
    let start = Instant::now();
    let worked = disjointify(
        &[
            IndexSet::new(vec![2, 10]).unwrap(),
            IndexSet::new(vec![6, 14]).unwrap(),
        ],
        2,
    )
    .map_err(|e| e.to_string())?;
    let json = serde_json::to_string(&worked).map_err(|e| e.to_string())?;
    let expected = r#"{"k":2,"L":[2,3,5,6,10,11,13,14],"classes":[[2,5,10,13],[3,6,11,14]],"intervals":{"2":[2,3],"6":[5,6],"10":[10,11],"14":[13,14]}}"#;
    ensure(json == expected, || format!("worked example gives {json}"))?;

    let mut cases = 0u64;
    let mut failures: Vec<String> = Vec::new();
    let mut oracle_errors: Vec<String> = Vec::new();
    for k in [2, 3] {
        let mut classes = vec![0u128; k];
        let mut walk = DisjointWalk::new(k);
        walk.run(
            &mut |m, l, expected| {
                cases += 1;
                match disjointify_masks(m, k, &mut classes) {
                    Ok(got) => {
                        let contained = m.iter().zip(&classes).all(|(mi, c)| mi & !c == 0);
                        if got != l || classes != expected || !contained {
                            failures.push(format!("k = {k}, M = {m:x?}"));
                        }
                    }
                    Err(e) => failures.push(format!("k = {k}, M = {m:x?}: {e}")),
                }
            },
            &mut |msg| oracle_errors.push(msg),
        );
    }
    failures.extend(oracle_errors);
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    ensure(cases == 3u64.pow(12) + 4u64.pow(12), || {
        format!("walked {cases} tuples")
    })?;
    summarize(cases as usize, failures, elapsed).map(|s| format!("{s}, worked example verbatim"))
}

fn reconstruction() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x2EC0);
    let mut entries = 0;
    let (cases, failures) = tally(100, |_| {
        let inst = random_reconstruction_instance(&mut rng).map_err(|e| e.to_string())?;
        let kind = inst.norm.kind();
        let r = reconstruct_tuple(
            &inst.v,
            &inst.w,
            &inst.w_tuple,
            &inst.delta_prime,
            &inst.delta,
            &inst.norm,
        )
        .map_err(|e| e.to_string())?;
        let classes =
            mod_k_classes(&IndexSet::range(0, inst.w.len()), inst.k).map_err(|e| e.to_string())?;
        for (i, wi) in inst.w_tuple.iter().enumerate() {
            let wb: Vec<BlockVector> = classes[i]
                .iter()
                .map(|&j| inst.w.as_slice()[j].clone())
                .collect();
            let vb: Vec<BlockVector> = classes[i]
                .iter()
                .map(|&j| inst.v.as_slice()[j].clone())
                .collect();
            ensure(r.tuple[i].len() == wi.len(), || {
                format!("V_{i} has the wrong length")
            })?;
            for (n, w_in) in wi.iter().enumerate() {
                entries += 1;
                let lambdas = solve_span(&wb, w_in).ok_or("w^i_n outside its class span")?;
                let v_in = combine(&vb, &lambdas);
                ensure(r.tuple[i].as_slice()[n] == v_in, || {
                    format!("v^{i}_{n} differs")
                })?;
                // C = 1 for the shipped norms
                let tail = q(4, 1) * inst.delta_prime.delta(n);
                ensure(norm_le(kind, &sub(&v_in, w_in), &tail), || {
                    format!("‖v^{i}_{n} - w^{i}_{n}‖ exceeds 4Cδ'_{n}")
                })?;
                ensure(tail <= two_pow(-(n as i64)), || {
                    format!("4Cδ'_{n} exceeds δ_{n}")
                })?;
            }
        }
        Ok(())
    });
    let mut out = summarize(cases, failures, start.elapsed())?;
    out.push_str(&format!(", {entries} entries"));
    Ok(out)
}

fn determinism() -> Outcome {
    let data = |f: &str| format!("{}/tests/data/{f}", env!("CARGO_MANIFEST_DIR"));
    let dir = std::env::temp_dir().join(format!("blockgame-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let transcript = dir.join("transcript.json");
    std::fs::copy(data("golden_transcript.json"), &transcript).map_err(|e| e.to_string())?;
    let transcript = transcript.to_string_lossy().into_owned();
    let runs: Vec<(Vec<String>, &str)> = vec![
        (vec!["net-enum".into(), "2".into()], ""),
        (
            vec![
                "round".into(),
                "--vector".into(),
                data("round_vector.json"),
                "--board".into(),
                data("round_board.json"),
            ],
            "",
        ),
        (
            vec![
                "cover".into(),
                "--input".into(),
                data("cover_input.json"),
                "--board".into(),
                data("cover_board.json"),
            ],
            "",
        ),
        (
            vec!["play".into(), "--config".into(), data("golden_config.json")],
            "",
        ),
        (
            vec!["play".into(), "--mode".into(), "interactive".into()],
            "0,3,5\n",
        ),
        (vec!["replay".into(), "--transcript".into(), transcript], ""),
        (
            vec!["solve".into(), "--config".into(), data("solve_config.json")],
            "",
        ),
        (
            vec![
                "disjointify".into(),
                "--input".into(),
                data("disjointify_input.json"),
            ],
            "",
        ),
        (
            vec![
                "verify".into(),
                "rounding".into(),
                "--seed".into(),
                "17".into(),
            ],
            "",
        ),
        (
            vec![
                "verify".into(),
                "covering".into(),
                "--seed".into(),
                "17".into(),
            ],
            "",
        ),
        (
            vec![
                "verify".into(),
                "transfer".into(),
                "--seed".into(),
                "17".into(),
            ],
            "",
        ),
        (
            vec![
                "verify".into(),
                "solver".into(),
                "--seed".into(),
                "17".into(),
            ],
            "",
        ),
        (
            vec![
                "verify".into(),
                "reconstruction".into(),
                "--seed".into(),
                "17".into(),
            ],
            "",
        ),
        (vec!["verify".into(), "disjointify".into()], ""),
    ];
    let exe = env!("CARGO_BIN_EXE_blockgame");
    let once = |args: &[String], input: &str| -> Result<(Option<i32>, Vec<u8>), String> {
        use std::io::Write;
        let mut child = Command::new(exe)
            .args(args)
            .env_remove("BLOCKGAME_CONFIG")
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| e.to_string())?;
        child
            .stdin
            .take()
            .unwrap()
            .write_all(input.as_bytes())
            .map_err(|e| e.to_string())?;
        let out = child.wait_with_output().map_err(|e| e.to_string())?;
        Ok((out.status.code(), out.stdout))
    };
    for (args, input) in &runs {
        let a = once(args, input)?;
        let b = once(args, input)?;
        ensure(a.0 == Some(0), || format!("{args:?} exited with {:?}", a.0))?;
        ensure(a == b, || format!("{args:?} differs between runs"))?;
    }
    Ok(format!(
        "{} commands, byte-identical output on repeat",
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("rounding certification", rounding),
        ("covering property", covering),
        ("net enumeration", enumeration),
        ("solver correctness", solver),
        ("strategy transfer bounds", transfer),
        ("disjointification", disjointification),
        ("reconstruction bound", reconstruction),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
