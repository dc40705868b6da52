//! Seeded property suites over the whole library, with JSON reports.
//!
//! Each suite draws its cases from a `ChaCha8Rng` seeded with the caller's
//! seed, so a report is a pure function of `(suite, cases, seed)`.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{
    block_mod_k_restriction, disjointify, disjointify_masks, mod_k_classes, odd_multiples,
    odd_multiples_mask, reconstruct_tuple, IndexSet,
};
use crate::error::{Error, Result};
use crate::game::{
    enumerate_net_in_span, game_tree_size, play_discrete, solve_bounded, Determination, Family,
    FamilySpec, MenuScript, Position, SampledLegal, StrategyI,
};
use crate::net::{covering_sequence, net_member, round_to_net, verify_covering, NetConfig};
use crate::norm::{NormKind, NormPlugin};
use crate::scalar::{int, ratio, Rational};
use crate::tolerance::ToleranceSequence;
use crate::transfer::{composite_nearness, run_adapted, TransferContext};
use crate::vector::{is_block_subsequence, BlockVector, FiniteBlockSequence};

pub const SUITES: [&str; 6] = [
    "rounding",
    "covering",
    "transfer",
    "solver",
    "disjointify",
    "reconstruction",
];

/// Default number of cases per suite.
pub fn default_cases(suite: &str) -> Option<usize> {
    match suite {
        "rounding" => Some(500),
        "covering" => Some(200),
        "transfer" => Some(50),
        "solver" | "reconstruction" => Some(100),
        "disjointify" => Some(0),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseFailure {
    pub case: usize,
    pub error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failed == 0
    }

    fn collect(suite: &str, seed: u64, results: impl IntoIterator<Item = Result<()>>) -> Self {
        let mut report = SuiteReport {
            suite: suite.to_string(),
            seed,
            cases: 0,
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        };
        for (case, r) in results.into_iter().enumerate() {
            report.cases += 1;
            match r {
                Ok(()) => report.passed += 1,
                Err(e) => {
                    report.failed += 1;
                    report.failures.push(CaseFailure {
                        case,
                        error: e.to_string(),
                    });
                }
            }
        }
        report
    }
}

/// Runs a suite by name. `cases = None` uses the suite's default; the
/// disjointify suite is exhaustive and ignores it.
pub fn run_suite(name: &str, cases: Option<usize>, seed: u64) -> Result<SuiteReport> {
    let n = match (cases, default_cases(name)) {
        (_, None) => {
            return Err(Error::Usage(format!(
                "unknown suite {name:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
        (Some(c), Some(_)) => c,
        (None, Some(d)) => d,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = match name {
        "rounding" => SuiteReport::collect(name, seed, (0..n).map(|_| rounding_case(&mut rng))),
        "covering" => SuiteReport::collect(name, seed, (0..n).map(|_| covering_case(&mut rng))),
        "transfer" => SuiteReport::collect(name, seed, (0..n).map(|_| transfer_case(&mut rng))),
        "solver" => SuiteReport::collect(name, seed, (0..n).map(|_| solver_case(&mut rng))),
        "reconstruction" => {
            SuiteReport::collect(name, seed, (0..n).map(|_| reconstruction_case(&mut rng)))
        }
        _ => disjointify_suite(seed),
    };
    Ok(report)
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Certification {
            what: what(),
            value: "false".into(),
            bound: "true".into(),
        })
    }
}

/// A nonzero rational `p/q` with `|p| ≤ 6`, `1 ≤ q ≤ 7`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let p = rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 };
    ratio(p, rng.gen_range(1..=7))
}

pub fn random_norm<R: Rng + ?Sized>(rng: &mut R, kinds: &[NormKind]) -> NormPlugin {
    NormPlugin::new(*kinds.choose(rng).expect("nonempty"))
}

/// Scales `x` into the unit ball if it lies outside.
pub fn into_unit_ball(x: &BlockVector, norm: &NormPlugin) -> BlockVector {
    if norm.in_unit_ball(x) {
        return x.clone();
    }
    let r = norm.upper_bound(x);
    x.scale(&(Rational::one() / r))
}

/// `count` disjoint, ordered, nonempty segments inside `[0, limit)`.
pub fn random_segments<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    limit: usize,
) -> Vec<(usize, usize)> {
    assert!(count <= limit);
    let mut cuts: Vec<usize> = (1..limit).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(count - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(limit);
    bounds
        .windows(2)
        .map(|w| {
            // trim at random, keeping at least one index
            let lo = rng.gen_range(w[0]..w[1]);
            let hi = rng.gen_range(lo..w[1]);
            (lo, hi)
        })
        .collect()
}

/// A net vector on `[lo, hi]`: coefficients `u·2^(-(k_i+1))` with
/// `u ∈ {±1, ±2}`, nonzero endpoints, retried until it lies in the net.
pub fn random_net_vector<R: Rng + ?Sized>(
    rng: &mut R,
    lo: usize,
    hi: usize,
    cfg: &NetConfig,
) -> Result<BlockVector> {
    loop {
        let v = BlockVector::from_pairs((lo..=hi).filter_map(|i| {
            if i != lo && i != hi && rng.gen_bool(0.3) {
                return None;
            }
            let u = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
            Some((i, int(u) * crate::scalar::pow2(-(cfg.k(i) as i64 + 1))))
        }));
        if net_member(&v, cfg)? {
            return Ok(v);
        }
    }
}

/// `(Z̃, w)` with `Z̃ ⊂ 𝔇` of length 2..=6 over indices below 12 and
/// `w ∈ <Z̃>` in the unit ball with `Z̃`-support at least 2.
pub fn random_rounding_input<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &NetConfig,
) -> Result<(FiniteBlockSequence, BlockVector)> {
    let len = rng.gen_range(2..=6);
    let mut board = Vec::with_capacity(len);
    for (lo, hi) in random_segments(rng, len, 12) {
        let v = if rng.gen_bool(0.3) {
            BlockVector::basis(lo)
        } else {
            random_net_vector(rng, lo, hi, cfg)?
        };
        board.push(v);
    }
    let board = FiniteBlockSequence::new(board)?;
    let mut chosen: Vec<usize> = (0..len).filter(|_| rng.gen_bool(0.6)).collect();
    while chosen.len() < 2 {
        chosen = (0..len).filter(|_| rng.gen_bool(0.6)).collect();
    }
    let coeffs: Vec<(usize, Rational)> =
        chosen.iter().map(|&j| (j, random_rational(rng))).collect();
    let w = board.combine(coeffs.iter().map(|(j, c)| (*j, c)));
    Ok((board.clone(), into_unit_ball(&w, cfg.norm())))
}

fn rounding_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let norm = random_norm(rng, &[NormKind::Ell1, NormKind::Sup, NormKind::Ell2]);
    let cfg = NetConfig::default().with_norm(norm);
    let (board, w) = random_rounding_input(rng, &cfg)?;
    let r = round_to_net(&w, &board, &cfg)?;
    let mu = board.span_coefficients(&w).expect("w is built in the span");
    let mu_t = board
        .span_coefficients(&r.rounded)
        .ok_or_else(|| Error::NotInSpan("rounded vector".into()))?;
    check(
        mu.iter()
            .zip(&mu_t)
            .all(|(a, b)| a.is_zero() == b.is_zero()),
        || "Z̃-support equality".into(),
    )?;
    check(net_member(&r.rounded, &cfg)?, || "w̃ ∈ 𝔇".into())?;
    let bound = crate::scalar::pow2(1 - cfg.k(r.m1) as i64);
    let err = cfg.norm().norm(&(&w - &r.rounded));
    check(err.le(&bound) && r.pass, || {
        format!(
            "‖w - w̃‖ = {err} ≤ {}",
            crate::scalar::format_rational(&bound)
        )
    })
}

/// A unit-ball block subsequence of `z` of length `1..=max_len`, each
/// vector a combination of one or two consecutive `z_j`.
pub fn random_block_subsequence<R: Rng + ?Sized>(
    rng: &mut R,
    z: &FiniteBlockSequence,
    start: usize,
    max_len: usize,
    norm: &NormPlugin,
) -> FiniteBlockSequence {
    let mut out = Vec::new();
    let mut j = start;
    while out.len() < max_len && j < z.len() {
        j += usize::from(rng.gen_bool(0.3));
        let width = rng.gen_range(1..=2);
        if j + width > z.len() {
            break;
        }
        let coeffs: Vec<Rational> = (0..width).map(|_| random_rational(rng)).collect();
        let v = z.slice(j..j + width).combine(coeffs.iter().enumerate());
        out.push(into_unit_ball(&v, norm));
        j += width;
    }
    FiniteBlockSequence::new(out).expect("built in block order")
}

fn covering_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let norm = random_norm(rng, &[NormKind::Ell1, NormKind::Sup, NormKind::Ell2]);
    let cfg = NetConfig::default().with_norm(norm);
    let board = FiniteBlockSequence::standard_basis(24);
    let z = covering_sequence(&board);
    let len = rng.gen_range(1..=5);
    let u = random_block_subsequence(rng, &z, 0, len, cfg.norm());
    let (rounded, cert) = verify_covering(&u, &z, &board, &cfg)?;
    check(cert.pass() && rounded.len() == u.len(), || {
        "covering certificate".into()
    })?;
    check(is_block_subsequence(&rounded, &board), || "Ũ ⪯ Z̃".into())?;
    for (i, (a, b)) in u.iter().zip(rounded.iter()).enumerate() {
        check(net_member(b, &cfg)?, || format!("ũ_{i} ∈ 𝔇"))?;
        let d = cfg.norm().norm(&(a - b));
        let delta = cfg.delta().delta(i);
        check(d.le(&delta), || format!("‖u_{i} - ũ_{i}‖ = {d} ≤ δ_{i}"))?;
    }
    Ok(())
}

/// Player I offering random one- or two-vector combinations from the board
/// after the last pick, enough of them for the adapter's `k_0 ≥ n`.
pub struct RandomBlocks {
    rng: ChaCha8Rng,
}

impl RandomBlocks {
    pub fn new(rng: ChaCha8Rng) -> Self {
        RandomBlocks { rng }
    }
}

impl StrategyI for RandomBlocks {
    fn play(&mut self, pos: &Position<'_>) -> Result<FiniteBlockSequence> {
        let start = pos.next_board_index().ok_or_else(|| {
            Error::Precondition("no board vector is left after the last pick".into())
        })?;
        let want = pos.round + 1 + self.rng.gen_range(0..=1);
        let norm = NormPlugin::new(pos.cfg.norm().kind());
        let mv = random_block_subsequence(&mut self.rng, pos.board, start, want, &norm);
        if mv.len() <= pos.round {
            return Err(Error::Precondition(format!(
                "board too short for a move of length {} in round {}",
                pos.round + 1,
                pos.round
            )));
        }
        Ok(mv)
    }
}

fn open_family(_: &FiniteBlockSequence) -> Determination {
    Determination::Undetermined
}

fn transfer_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let norm = random_norm(rng, &[NormKind::Ell1, NormKind::Sup]);
    let cfg = NetConfig::default().with_norm(norm);
    let ctx = TransferContext::new(FiniteBlockSequence::standard_basis(128), cfg)?;
    let horizon = rng.gen_range(1..=4);
    let mut player_i = RandomBlocks::new(ChaCha8Rng::seed_from_u64(rng.gen()));
    let discrete = SampledLegal::new(ChaCha8Rng::seed_from_u64(rng.gen()));
    let run = run_adapted(&ctx, &mut player_i, discrete, horizon, &open_family)?;
    check(run.rounds.iter().all(|r| r.pass), || {
        "round certificates".into()
    })?;
    let played = run.transcript.outcome()?;
    let reference = perturbed_reference(&run.discrete_outcome, ctx.inner_delta());
    composite_nearness(&played, &run.discrete_outcome, &reference, &ctx)?;
    Ok(())
}

/// `x̃_n + (δ'_n/2)·e_{max supp x̃_n}`: a family member `Δ'`-near the
/// discrete outcome with the same supports.
pub fn perturbed_reference(
    discrete: &FiniteBlockSequence,
    inner: &ToleranceSequence,
) -> FiniteBlockSequence {
    let vs = discrete
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let top = x.max_support().expect("nonzero");
            let bump = BlockVector::from_pairs([(top, inner.delta(n) / int(2))]);
            let v = x + &bump;
            if v.get(top).is_none() {
                x - &bump
            } else {
                v
            }
        })
        .collect();
    FiniteBlockSequence::new(vs).expect("supports are unchanged")
}

/// Plain minimax without memoization: II wins a node iff the family says
/// `In`, or it is undecided, rounds remain, and every menu move has a reply
/// leading to a win.
pub fn reference_minimax(
    seq: &FiniteBlockSequence,
    rounds_left: usize,
    menu: &[FiniteBlockSequence],
    family: &dyn Family,
    cfg: &NetConfig,
) -> Result<bool> {
    match family.decide(seq) {
        Determination::In => return Ok(true),
        Determination::Out => return Ok(false),
        Determination::Undetermined => {}
    }
    if rounds_left == 0 {
        return Ok(false);
    }
    for m in menu {
        let mut any = false;
        for o in enumerate_net_in_span(m, seq.last(), cfg)? {
            let mut next = seq.clone();
            next.push(o)?;
            if reference_minimax(&next, rounds_left - 1, menu, family, cfg)? {
                any = true;
                break;
            }
        }
        if !any {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A random solver instance on `(e_0, …, e_3)` with a menu of singletons,
/// horizon 1 or 2 and a game tree of at most `max_nodes` nodes.
pub struct SolverInstance {
    pub board: FiniteBlockSequence,
    pub prefix: FiniteBlockSequence,
    pub horizon: usize,
    pub menu: Vec<FiniteBlockSequence>,
    pub family: FamilySpec,
}

pub fn random_solver_instance<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &NetConfig,
    max_nodes: usize,
) -> Result<SolverInstance> {
    let board = FiniteBlockSequence::standard_basis(4);
    loop {
        let horizon = rng.gen_range(1..=2);
        let mut idx: Vec<usize> = (0..4).collect();
        idx.shuffle(rng);
        let mut idx: Vec<usize> = idx[..rng.gen_range(1..=2)].to_vec();
        idx.sort_unstable();
        let menu: Vec<FiniteBlockSequence> = idx
            .iter()
            .map(|&i| FiniteBlockSequence::new(vec![BlockVector::basis(i)]).expect("one vector"))
            .collect();
        let e = |i: usize, c: Rational| BlockVector::from_pairs([(i, c)]);
        let family = match rng.gen_range(0..5) {
            0 => FamilySpec::Constant {
                value: rng.gen_bool(0.5),
            },
            1 => FamilySpec::PickSupportSize { size: 1 },
            2 => FamilySpec::PositiveLeading {
                length: rng.gen_range(1..=2),
            },
            3 => FamilySpec::LeadingAtLeast {
                length: rng.gen_range(1..=2),
                bound: ratio(rng.gen_range(-4..=4), 4),
            },
            _ => FamilySpec::Cylinder {
                prefix: vec![e(idx[0], ratio(rng.gen_range(1..=4), 4))],
            },
        };
        let prefix = FiniteBlockSequence::empty();
        if game_tree_size(&board, &prefix, horizon, &menu, &family, cfg, max_nodes)?.is_some() {
            return Ok(SolverInstance {
                board,
                prefix,
                horizon,
                menu,
                family,
            });
        }
    }
}

/// Every sequence of menu indices of length `horizon`.
pub fn menu_scripts(menu_len: usize, horizon: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..horizon {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..menu_len).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn solver_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let cfg = NetConfig::default();
    let inst = random_solver_instance(rng, &cfg, 200)?;
    let out = solve_bounded(
        &inst.board,
        &inst.prefix,
        inst.horizon,
        &inst.menu,
        &inst.family,
        &cfg,
    )?;
    let expected = reference_minimax(&inst.prefix, inst.horizon, &inst.menu, &inst.family, &cfg)?;
    check(out.accepts == expected, || {
        format!("solver says {} but minimax says {expected}", out.accepts)
    })?;
    if let Some(strategy) = out.strategy {
        for script in menu_scripts(inst.menu.len(), inst.horizon) {
            let mut i = MenuScript::new(inst.menu.clone(), script.clone());
            let mut ii = strategy.clone();
            let t = play_discrete(
                &inst.board,
                &inst.prefix,
                inst.horizon,
                &mut i,
                &mut ii,
                &inst.family,
                &cfg,
            )?;
            check(t.verdict == Some(true), || {
                format!("witness loses against menu script {script:?}")
            })?;
        }
    }
    Ok(())
}

fn disjointify_suite(seed: u64) -> SuiteReport {
    let mut results: Vec<Result<()>> = Vec::new();
    let worked = disjointify(
        &[
            IndexSet::new(vec![2, 10]).expect("sorted"),
            IndexSet::new(vec![6, 14]).expect("sorted"),
        ],
        2,
    )
    .and_then(|p| {
        check(p.l.as_slice() == [2, 3, 5, 6, 10, 11, 13, 14], || {
            "worked example L".into()
        })
    });
    results.push(worked);
    let mut passed = 0;
    for k in [2, 3] {
        let mut walk = Walk::new(k);
        walk.go(0, 0, 0);
        results.extend(walk.failures);
        passed += walk.passed;
    }
    let passes = std::iter::repeat_with(|| Ok(())).take(passed);
    SuiteReport::collect("disjointify", seed, results.into_iter().chain(passes))
}

/// Depth-first walk over every assignment of the first 12 elements of `N`
/// to `{none, M_0, …, M_{k-1}}`. The expected `L` and its classes are built
/// along the way from the interval rule and the enumeration of `L`.
struct Walk {
    k: usize,
    n: Vec<usize>,
    n_mask: u128,
    m: Vec<u128>,
    classes: Vec<u128>,
    expected: Vec<u128>,
    passed: usize,
    failures: Vec<Result<()>>,
}

impl Walk {
    fn new(k: usize) -> Self {
        Walk {
            k,
            n: odd_multiples(k, 12).as_slice().to_vec(),
            n_mask: odd_multiples_mask(k),
            m: vec![0; k],
            classes: vec![0; k],
            expected: vec![0; k],
            passed: 0,
            failures: Vec::new(),
        }
    }

    fn fail(&mut self, what: String) {
        self.failures.push(check(false, || what));
    }

    fn go(&mut self, j: usize, l: u128, rank: usize) {
        let k = self.k;
        if j == self.n.len() {
            match disjointify_masks(&self.m, k, &mut self.classes) {
                Ok(got) if got == l && self.classes == self.expected => self.passed += 1,
                Ok(_) => self.fail(format!("k = {k}, M = {:?}: wrong L or classes", self.m)),
                Err(e) => self.failures.push(Err(e)),
            }
            return;
        }
        self.go(j + 1, l, rank);
        let x = self.n[j];
        for i in 0..k {
            let lo = x - i;
            let interval = ((1u128 << k) - 1) << lo;
            if interval & l != 0 || interval & self.n_mask != 1 << x {
                self.fail(format!(
                    "k = {k}: I_{x} for i = {i} overlaps or meets N twice"
                ));
                continue;
            }
            // the interval misses `l`, so these bits are fresh and the
            // toggle undoes itself
            for t in 0..k {
                self.expected[(rank + t) % k] ^= 1 << (lo + t);
            }
            self.m[i] |= 1 << x;
            self.go(j + 1, l | interval, rank + k);
            self.m[i] &= !(1 << x);
            for t in 0..k {
                self.expected[(rank + t) % k] ^= 1 << (lo + t);
            }
        }
    }
}

/// Unit-norm vectors with a spare index after each, so that perturbations
/// on the spare keep the block order.
fn random_unit_blocks<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    norm: &NormPlugin,
) -> (Vec<BlockVector>, Vec<usize>) {
    let mut vs = Vec::with_capacity(count);
    let mut spares = Vec::with_capacity(count);
    let mut next = 0;
    for _ in 0..count {
        let v = match norm.kind() {
            NormKind::Ell2 => {
                if rng.gen_bool(0.5) {
                    BlockVector::basis(next)
                } else {
                    BlockVector::from_pairs([(next, ratio(3, 5)), (next + 1, ratio(-4, 5))])
                }
            }
            _ => {
                let width = rng.gen_range(1..=3);
                let raw = BlockVector::from_pairs(
                    (next..next + width).map(|i| (i, random_rational(rng))),
                );
                let r = norm
                    .norm(&raw)
                    .exact()
                    .expect("ell1 and sup norms are rational");
                raw.scale(&(Rational::one() / r))
            }
        };
        let top = v.max_support().expect("nonzero");
        spares.push(top + 1);
        next = top + 2;
        vs.push(v);
    }
    (vs, spares)
}

/// Inputs of one [`reconstruct_tuple`] call: unit vectors `W`, a `V` that is
/// `Δ'`-near it, and a unit-ball block subsequence of each `W|_ℕ_i(mod k)`.
pub struct ReconstructionInstance {
    pub k: usize,
    pub norm: NormPlugin,
    pub delta: ToleranceSequence,
    pub delta_prime: ToleranceSequence,
    pub v: FiniteBlockSequence,
    pub w: FiniteBlockSequence,
    pub w_tuple: Vec<FiniteBlockSequence>,
}

pub fn random_reconstruction_instance<R: Rng + ?Sized>(
    rng: &mut R,
) -> Result<ReconstructionInstance> {
    let norm = random_norm(rng, &[NormKind::Ell1, NormKind::Sup, NormKind::Ell2]);
    let delta = ToleranceSequence::halving();
    let c = norm.basis_constant().clone();
    // δ'_n = δ_n/(4C), which keeps Σ_{j>n} δ'_j ≤ δ'_n
    let delta_prime = delta.scaled(&(Rational::one() / (int(4) * &c)));
    let k = rng.gen_range(2..=3);
    let len = k * rng.gen_range(2..=4);
    let (ws, spares) = random_unit_blocks(rng, len, &norm);
    let vs: Vec<BlockVector> = ws
        .iter()
        .zip(&spares)
        .enumerate()
        .map(|(j, (w, &s))| {
            let frac = ratio(rng.gen_range(0..=8), 8);
            let sign = if rng.gen_bool(0.5) { int(1) } else { int(-1) };
            let eps = sign * frac * delta_prime.delta(j);
            if eps.is_zero() {
                w.clone()
            } else {
                w + &BlockVector::from_pairs([(s, eps)])
            }
        })
        .collect();
    let w = FiniteBlockSequence::new(ws)?;
    let v = FiniteBlockSequence::new(vs)?;
    let boards = block_mod_k_restriction(&w, &IndexSet::range(0, len), k)?;
    let w_tuple: Vec<FiniteBlockSequence> = boards
        .iter()
        .map(|b| random_block_subsequence(rng, b, 0, b.len(), &norm))
        .collect();
    Ok(ReconstructionInstance {
        k,
        norm,
        delta,
        delta_prime,
        v,
        w,
        w_tuple,
    })
}

fn reconstruction_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let ReconstructionInstance {
        k,
        norm,
        delta,
        delta_prime,
        v,
        w,
        w_tuple,
    } = random_reconstruction_instance(rng)?;
    let len = w.len();
    let r = reconstruct_tuple(&v, &w, &w_tuple, &delta_prime, &delta, &norm)?;
    check(r.entries.iter().all(|e| e.pass), || {
        "reconstruction entries".into()
    })?;
    let classes = mod_k_classes(&IndexSet::range(0, len), k)?;
    for (i, vi) in r.tuple.iter().enumerate() {
        let vb = v.restrict(classes[i].as_slice())?;
        check(is_block_subsequence(vi, &vb), || {
            format!("V_{i} ⪯ V|_ℕ_{i}(mod {k})")
        })?;
        for (n, (a, b)) in vi.iter().zip(w_tuple[i].iter()).enumerate() {
            let d = norm.norm(&(a - b));
            check(d.le(&delta.delta(n)), || {
                format!("‖v^{i}_{n} - w^{i}_{n}‖ = {d} ≤ δ_{n}")
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_a_usage_error() {
        let err = run_suite("nope", None, 0).unwrap_err();
        assert_eq!(err.exit_code(), 64);
    }

    #[test]
    fn small_runs_pass() {
        for suite in [
            "rounding",
            "covering",
            "transfer",
            "solver",
            "reconstruction",
        ] {
            let r = run_suite(suite, Some(5), 11).unwrap();
            assert!(r.pass(), "{suite}: {:?}", r.failures);
            assert_eq!(r.cases, 5);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&run_suite("rounding", Some(20), 3).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite("rounding", Some(20), 3).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn menu_script_count() {
        assert_eq!(menu_scripts(2, 3).len(), 8);
        assert_eq!(menu_scripts(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn segments_are_ordered() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = random_segments(&mut rng, 6, 12);
            assert_eq!(s.len(), 6);
            assert!(s.windows(2).all(|w| w[0].1 < w[1].0));
        }
    }
}
