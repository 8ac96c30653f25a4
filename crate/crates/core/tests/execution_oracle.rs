//! Randomized equivalence between the interpreter and a brute-force tuple
//! enumeration, plus the structural execution properties: monotonicity under
//! detection removal, scale invariance, chain independence, determinism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vizfilter_core::ast::{Adjective, Program};
use vizfilter_core::interpreter::{run_chain, run_program, RenderStyle};
use vizfilter_core::registry::Registry;
use vizfilter_core::scene::{FixtureBackend, SceneFrame};
use vizfilter_core::testkit::{arbitrary_chain, arbitrary_frame, oracle_chain_matches};

fn match_set(
    chain: &vizfilter_core::ast::FindChain,
    frame: &SceneFrame,
) -> Vec<(Vec<String>, String)> {
    let registry = Registry::builtin();
    let backend = FixtureBackend::new(registry);
    let result = run_chain(chain, frame, &backend, registry).unwrap();
    assert_eq!(
        result.matches.is_empty(),
        result.failure_depth.is_some(),
        "failure depth accompanies exactly the empty outcomes"
    );
    let mut set: Vec<(Vec<String>, String)> =
        result.matches.into_iter().map(|m| (m.path, m.value)).collect();
    set.sort();
    set
}

#[test]
fn interpreter_agrees_with_brute_force_enumeration() {
    let registry = Registry::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    for round in 0..600 {
        let frame = arbitrary_frame(&mut rng, "f", 10);
        let chain = arbitrary_chain(&mut rng, 3);
        let got = match_set(&chain, &frame);
        let expected = oracle_chain_matches(&chain, &frame, registry);
        assert_eq!(got, expected, "round {round}: {chain:?} over {frame:?}");
    }
}

#[test]
fn removing_a_detection_never_adds_matches() {
    // Size adjectives are set-relative (dropping the largest candidate can
    // promote another into the kept quartile), so the monotonicity property
    // is over size-free chains.
    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    let mut tested = 0;
    while tested < 300 {
        let frame = arbitrary_frame(&mut rng, "f", 10);
        let chain = arbitrary_chain(&mut rng, 3);
        if frame.detections.is_empty()
            || chain.items.iter().any(|i| matches!(i.adjective, Some(Adjective::Size(_))))
        {
            continue;
        }
        tested += 1;
        let full = match_set(&chain, &frame);
        let mut smaller = frame.clone();
        let removed = smaller.detections.remove(rng.random_range(0..smaller.detections.len())).id;
        for m in match_set(&chain, &smaller) {
            assert!(
                full.contains(&m),
                "removing {removed} invented match {m:?} for {chain:?}"
            );
        }
    }
}

fn scaled(frame: &SceneFrame, s: f64) -> SceneFrame {
    let mut out = frame.clone();
    out.width *= s;
    out.height *= s;
    for d in &mut out.detections {
        d.bbox.x *= s;
        d.bbox.y *= s;
        d.bbox.w *= s;
        d.bbox.h *= s;
    }
    out
}

#[test]
fn uniform_scaling_changes_nothing() {
    let registry = Registry::builtin();
    let backend = FixtureBackend::new(registry);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5C);
    for _ in 0..200 {
        let frame = arbitrary_frame(&mut rng, "f", 10);
        let chain = arbitrary_chain(&mut rng, 3);
        let program = Program { name: None, chains: vec![chain.clone()] };
        let base = run_program(&program, &frame, &backend, registry, RenderStyle::Full).unwrap();
        for s in [2.0, 10.0] {
            let big = scaled(&frame, s);
            let run = run_program(&program, &big, &backend, registry, RenderStyle::Full).unwrap();
            assert_eq!(run.announcement.text, base.announcement.text, "scale {s}");
            assert_eq!(run.chains[0].matches, base.chains[0].matches, "scale {s}");
        }
    }
}

#[test]
fn chains_run_independently_and_deterministically() {
    let registry = Registry::builtin();
    let backend = FixtureBackend::new(registry);
    let mut rng = ChaCha8Rng::seed_from_u64(0xAB);
    for _ in 0..200 {
        let frame = arbitrary_frame(&mut rng, "f", 10);
        let a = arbitrary_chain(&mut rng, 3);
        let b = arbitrary_chain(&mut rng, 3);
        let ab = Program { name: None, chains: vec![a.clone(), b.clone()] };
        let ba = Program { name: None, chains: vec![b.clone(), a.clone()] };

        let run_ab = run_program(&ab, &frame, &backend, registry, RenderStyle::Full).unwrap();
        let run_ba = run_program(&ba, &frame, &backend, registry, RenderStyle::Full).unwrap();

        // Per-chain results equal the standalone runs, in either order.
        assert_eq!(run_ab.chains[0].matches, match_set_raw(&a, &frame));
        assert_eq!(run_ab.chains[1].matches, match_set_raw(&b, &frame));
        assert_eq!(run_ab.chains[0].matches, run_ba.chains[1].matches);
        assert_eq!(run_ab.chains[1].matches, run_ba.chains[0].matches);

        // Same inputs, same bytes.
        let again = run_program(&ab, &frame, &backend, registry, RenderStyle::Full).unwrap();
        assert_eq!(again.announcement, run_ab.announcement);
    }
}

fn match_set_raw(
    chain: &vizfilter_core::ast::FindChain,
    frame: &SceneFrame,
) -> Vec<vizfilter_core::interpreter::ExecutionMatch> {
    let registry = Registry::builtin();
    let backend = FixtureBackend::new(registry);
    run_chain(chain, frame, &backend, registry).unwrap().matches
}
